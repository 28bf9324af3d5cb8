#pragma once

// Umbrella header.

#include "leftdiff/scalar.hpp"
#include "leftdiff/linalg.hpp"
#include "leftdiff/algebra.hpp"
#include "leftdiff/filtration.hpp"
#include "leftdiff/principal_parts.hpp"
#include "leftdiff/poly_diffops.hpp"
#include "leftdiff/free_nc.hpp"
#include "leftdiff/spec_io.hpp"
