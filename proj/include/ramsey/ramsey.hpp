#pragma once

#include "ramsey/errors.hpp"
#include "ramsey/pulses.hpp"
#include "ramsey/core.hpp"
#include "ramsey/analytic.hpp"
#include "ramsey/numeric.hpp"
#include "ramsey/quadrature.hpp"
#include "ramsey/ensemble.hpp"
#include "ramsey/parallel.hpp"
#include "ramsey/analysis.hpp"
