#pragma once

// Umbrella header: positive linear maps between matrix algebras, their
// matrix representation, positivity classification, face structure,
// two-dimensional extremal theory, and entanglement detection.

#include "posmap/errors.hpp"
#include "posmap/complex_matrix.hpp"
#include "posmap/rng.hpp"
#include "posmap/eig.hpp"
#include "posmap/choi.hpp"
#include "posmap/positivity.hpp"
#include "posmap/faces.hpp"
#include "posmap/stormer2d.hpp"
#include "posmap/entanglement.hpp"
#include "posmap/json_io.hpp"
