#pragma once

#include "rootiter/baselines.hpp"
#include "rootiter/common.hpp"
#include "rootiter/contfrac.hpp"
#include "rootiter/iteration.hpp"
#include "rootiter/report.hpp"
#include "rootiter/stability.hpp"
