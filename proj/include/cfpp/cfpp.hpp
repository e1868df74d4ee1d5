#pragma once

// Characteristic functions of transformed random variables: positive part,
// absolute value, two-barrier clamp, option payoffs, and running maxima of
// random walks, all computed from the characteristic function of the
// underlying variable through principal-value sign-kernel transforms.

#include "cfpp/cf_function.hpp"
#include "cfpp/common.hpp"
#include "cfpp/config_io.hpp"
#include "cfpp/distribution.hpp"
#include "cfpp/grid.hpp"
#include "cfpp/oracles.hpp"
#include "cfpp/parallel.hpp"
#include "cfpp/pv_engine.hpp"
#include "cfpp/quadrature.hpp"
#include "cfpp/spitzer.hpp"
#include "cfpp/transforms.hpp"
