#pragma once

#include "systolic/config.hpp"
#include "systolic/matrix.hpp"
#include "systolic/model.hpp"
#include "systolic/random.hpp"
#include "systolic/report.hpp"
#include "systolic/simulator.hpp"
#include "systolic/sweep.hpp"
#include "systolic/trace.hpp"
