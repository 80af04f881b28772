#pragma once

// Seeded generators for algebra elements, module vectors, unitaries and probe norms.
// Every routine draws only from the caller's engine, so identical seeds give identical draws.

#include <cstdint>
#include <random>
#include <vector>

#include "hcm/kernel.hpp"

namespace hcm {

using Rng = std::mt19937_64;

Complex random_complex(Rng& rng);
Matrix random_matrix(Rng& rng, int rows, int cols);
AlgebraElement random_element(Rng& rng, int d);
ModuleVector random_vector(Rng& rng, int d, int k);
/// Random direction rescaled to the given norm (norm 0 gives the zero vector).
ModuleVector random_vector_with_norm(Rng& rng, int d, int k, double norm);

/// Haar-distributed n x n unitary (QR of a Ginibre matrix with phase correction).
Matrix random_unitary(Rng& rng, int n);
/// rows x cols matrix with orthonormal rows (rows <= cols): B B^* = 1.
Matrix random_isometry(Rng& rng, int rows, int cols);

double log_uniform(Rng& rng, double lo, double hi);

/// One log-uniform draw per stratum of [lo, hi] split into `count` equal log-width cells.
std::vector<double> stratified_norms(Rng& rng, int count, double lo, double hi);

}  // namespace hcm
