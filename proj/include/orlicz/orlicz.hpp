#pragma once

#include "orlicz/asplund.hpp"
#include "orlicz/convex_function.hpp"
#include "orlicz/curvature.hpp"
#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/integration.hpp"
#include "orlicz/legendre.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/moments.hpp"
#include "orlicz/prototype.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/variation.hpp"
#include "orlicz/weight.hpp"
