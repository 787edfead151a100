#pragma once

// Everything at once.

#include "arith_mm/errors.hpp"
#include "arith_mm/caps.hpp"
#include "arith_mm/number_types.hpp"
#include "arith_mm/integer_arithmetic.hpp"
#include "arith_mm/effective_bounds.hpp"
#include "arith_mm/rational_linalg.hpp"
#include "arith_mm/torsion_model.hpp"
#include "arith_mm/gl_orbit.hpp"
#include "arith_mm/semisimple_algebra.hpp"
#include "arith_mm/json_io.hpp"
#include "arith_mm/random_instances.hpp"
#include "arith_mm/acceptance.hpp"
