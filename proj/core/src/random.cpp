#include "qslab/random.hpp"

#include <cmath>

namespace qslab {

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  // Column-major fill order is part of the seeded contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

UnitaryOp haar_unitary(int dim, Rng& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return UnitaryOp(std::move(q));
}

UnitaryOp haar_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

HermitianOp random_hermitian(int dim, Rng& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  return HermitianOp::from_hermitian_part(g);
}

Ket random_ket(int dim, Rng& rng) { return Ket::normalized(gaussian_matrix(dim, 1, rng).col(0)); }

Ket random_ket(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_ket(dim, rng);
}

}  // namespace qslab
