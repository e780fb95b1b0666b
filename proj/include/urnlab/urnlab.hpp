#pragma once

#include "urnlab/numeric.hpp"
#include "urnlab/urn.hpp"
#include "urnlab/polynomial.hpp"
#include "urnlab/exact.hpp"
#include "urnlab/series.hpp"
#include "urnlab/urn_series.hpp"
#include "urnlab/quadrature.hpp"
#include "urnlab/analytic.hpp"
#include "urnlab/moments.hpp"
#include "urnlab/deviation.hpp"
#include "urnlab/elliptic.hpp"
#include "urnlab/simulate.hpp"
