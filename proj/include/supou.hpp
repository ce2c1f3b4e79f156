#pragma once

#include "supou/charfn.hpp"
#include "supou/data.hpp"
#include "supou/error.hpp"
#include "supou/identify.hpp"
#include "supou/io.hpp"
#include "supou/kbe.hpp"
#include "supou/lift.hpp"
#include "supou/mms.hpp"
#include "supou/mms_study.hpp"
#include "supou/model.hpp"
#include "supou/nelder_mead.hpp"
#include "supou/oracle_d.hpp"
#include "supou/parallel.hpp"
#include "supou/presets.hpp"
#include "supou/problem.hpp"
#include "supou/riccati.hpp"
#include "supou/rng.hpp"
#include "supou/simulate.hpp"
#include "supou/units.hpp"
