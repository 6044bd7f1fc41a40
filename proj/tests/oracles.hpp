#pragma once

// Independent reference computations used by the tests. They share no code
// path with the library beyond Eigen storage and its decompositions.

#include <cmath>
#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline Mat pauli(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

/// Pauli string such as "XIZ", leftmost factor most significant.
inline Mat pauli_string(const std::string& s) {
  Mat out = Mat::Identity(1, 1);
  for (char c : s) out = kron(out, pauli(c));
  return out;
}

/// Digits of a flat index in mixed radix, most significant first.
inline std::vector<int> digits(long idx, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    d[f] = static_cast<int>(idx % dims[f]);
    idx /= dims[f];
  }
  return d;
}

/// Partial trace in the canonical factorization, by summing matrix entries
/// whose traced-out digits agree.
inline Mat partial_trace(const Mat& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) kept[k] = true;
  std::vector<int> kdims;
  for (int k : keep) kdims.push_back(dims[k]);
  long kd = 1;
  for (int d : kdims) kd *= d;
  Mat out = Mat::Zero(kd, kd);
  for (long i = 0; i < rho.rows(); ++i) {
    const auto di = digits(i, dims);
    for (long j = 0; j < rho.cols(); ++j) {
      const auto dj = digits(j, dims);
      bool same = true;
      for (std::size_t f = 0; f < dims.size(); ++f)
        if (!kept[f] && di[f] != dj[f]) same = false;
      if (!same) continue;
      long ri = 0, rj = 0;
      for (int k : keep) {
        ri = ri * dims[k] + di[k];
        rj = rj * dims[k] + dj[k];
      }
      out(ri, rj) += rho(i, j);
    }
  }
  return out;
}

/// Dimension of {X : [X, H] = 0} as the nullity of I (x) H - H^T (x) I.
/// The solution space is closed under adjoint, so its complex dimension
/// equals the real dimension of its Hermitian part.
inline int commutant_nullity(const Mat& h) {
  const long n = h.rows();
  Mat super = kron(Mat::Identity(n, n), h) - kron(h.transpose(), Mat::Identity(n, n));
  Eigen::JacobiSVD<Mat> svd(super);
  const auto& s = svd.singularValues();
  const double cut = 1e-9 * std::max(1.0, s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return static_cast<int>(n * n) - rank;
}

/// Transverse-field Ising chain built from bit manipulations of basis states.
inline Mat ising(int n, double J, double h, bool periodic) {
  const long dim = 1L << n;
  Mat m = Mat::Zero(dim, dim);
  const int bonds = periodic && n > 2 ? n : n - 1;
  for (long s = 0; s < dim; ++s) {
    for (int b = 0; b < bonds; ++b) {
      const int i = b, j = (b + 1) % n;
      const int zi = (s >> (n - 1 - i)) & 1 ? -1 : 1;
      const int zj = (s >> (n - 1 - j)) & 1 ? -1 : 1;
      m(s, s) += -J * zi * zj;
    }
    for (int i = 0; i < n; ++i) m(s ^ (1L << (n - 1 - i)), s) += -h;
  }
  return m;
}

inline double entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

/// |a b| prod_k |cos(2 g_k t / hbar)| for |+> environments.
inline double zurek_plus(double a, double b, const std::vector<double>& g, double t, double hbar = 1.0) {
  double v = std::abs(a * b);
  for (double gk : g) v *= std::abs(std::cos(2.0 * gk * t / hbar));
  return v;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
