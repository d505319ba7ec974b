#pragma once

#include "analytic.hpp"
#include "cloud.hpp"
#include "eigen.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "special.hpp"
#include "sumrules.hpp"

namespace rmtlab {
inline constexpr const char* kVersion = "0.1.0";
}
