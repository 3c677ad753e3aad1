#pragma once

#include "varex/config.hpp"
#include "varex/constants.hpp"
#include "varex/dyadic_grid.hpp"
#include "varex/errors.hpp"
#include "varex/exponent_field.hpp"
#include "varex/harness.hpp"
#include "varex/norms.hpp"
#include "varex/operators.hpp"
#include "varex/quadrature.hpp"
#include "varex/quasirandom.hpp"
#include "varex/radial_function.hpp"
#include "varex/report.hpp"
