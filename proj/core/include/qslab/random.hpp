#pragma once

// Seeded sampling helpers. No global RNG state: every draw goes through an
// explicit engine or seed.

#include <cstdint>
#include <random>

#include "qslab/hilbert.hpp"

namespace qslab {

using Rng = std::mt19937_64;

/// Entries i.i.d. complex standard normal (real and imaginary parts N(0, 1/2)).
Matrix gaussian_matrix(int rows, int cols, Rng& rng);

/// QR of a Gaussian matrix with the R diagonal phases divided out.
UnitaryOp haar_unitary(int dim, Rng& rng);
UnitaryOp haar_unitary(int dim, std::uint64_t seed);

/// Gaussian Hermitian matrix (G + G^dagger) / 2.
HermitianOp random_hermitian(int dim, Rng& rng);

Ket random_ket(int dim, Rng& rng);
Ket random_ket(int dim, std::uint64_t seed);

}  // namespace qslab
