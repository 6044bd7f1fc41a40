#pragma once

// Dense finite-dimensional Hilbert-space substrate.
//
// All value types are immutable after construction and validate their
// defining invariant (normalization, Hermiticity, unitarity) on entry.
// Dimensions are capped at kMaxDim; everything is dense.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qslab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = std::vector<double>;

inline constexpr int kMaxDim = 256;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kUnitTol = 1e-10;
inline constexpr double kClusterTol = 1e-8;

/// Normalized state vector.
class Ket {
 public:
  /// Throws ArgumentError unless |amplitudes| = 1 within tol.
  explicit Ket(Vector amplitudes, double tol = kNormTol);

  /// Rescales a nonzero vector to unit norm.
  static Ket normalized(const Vector& v);
  /// Computational basis vector |index>.
  static Ket basis(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  cplx operator[](int i) const { return amps_(i); }

 private:
  Vector amps_;
};

/// Hermitian operator. Stored entries are exactly Hermitian: the input is
/// checked against herm_tol and then replaced by its Hermitian part.
class HermitianOp {
 public:
  explicit HermitianOp(const Matrix& entries, double tol = kHermTol);

  /// Skips the check; used for results of Hermiticity-preserving algebra.
  static HermitianOp from_hermitian_part(const Matrix& entries);
  static HermitianOp identity(int dim);
  static HermitianOp zero(int dim);
  static HermitianOp diagonal(std::span<const double> entries);
  static HermitianOp projector(const Ket& k);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOp operator+(const HermitianOp& o) const;
  HermitianOp operator-(const HermitianOp& o) const;
  HermitianOp operator*(double s) const;

 private:
  struct Trusted {};
  HermitianOp(Trusted, Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Unitary operator, checked to unit_tol on construction.
class UnitaryOp {
 public:
  explicit UnitaryOp(Matrix entries, double tol = kUnitTol);

  static UnitaryOp identity(int dim);
  static UnitaryOp phase(int dim, double theta);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  UnitaryOp adjoint() const;
  UnitaryOp operator*(const UnitaryOp& o) const;
  Ket apply(const Ket& k) const;

 private:
  Matrix m_;
};

/// Eigen-decomposition with eigenvalues clustered into degenerate blocks.
struct SpectralDecomp {
  RealVector eigenvalues;               // ascending, one per cluster
  std::vector<HermitianOp> projectors;  // spectral projector per cluster
  std::vector<int> multiplicities;
  std::vector<Matrix> eigenbases;       // orthonormal columns spanning each cluster

  int dim() const;
  HermitianOp reconstruct() const;
};

/// A tensor product structure: factor dimensions plus a unitary identifying
/// (factor_0 (x) ... (x) factor_{n-1}) with the full space. Factor 0 is the
/// most significant index in the Kronecker ordering.
class Tps {
 public:
  Tps(std::vector<int> factor_dims, UnitaryOp iso);

  /// Identity identification.
  static Tps canonical(std::vector<int> factor_dims);
  /// n qubit factors, identity identification.
  static Tps qubits(int n);

  const std::vector<int>& factor_dims() const { return dims_; }
  int factor_count() const { return static_cast<int>(dims_.size()); }
  int total_dim() const;
  const UnitaryOp& iso() const { return iso_; }

  /// Same factorization seen through a further unitary: iso -> u * iso.
  Tps transformed(const UnitaryOp& u) const;

  /// Operator acting as `local` on `factor` and identity elsewhere, pushed
  /// into the full space through iso.
  HermitianOp embed(const HermitianOp& local, int factor) const;

 private:
  std::vector<int> dims_;
  UnitaryOp iso_;
};

Matrix kron(const Matrix& a, const Matrix& b);

/// Kronecker product of a non-empty list, in list order.
HermitianOp tensor_product(std::span<const HermitianOp> ops);
Ket tensor_product(std::span<const Ket> kets);
UnitaryOp tensor_product(std::span<const UnitaryOp> ops);

/// Reduced operator on the factors listed in `keep` (a non-empty proper
/// subset); kept factors appear in ascending index order.
HermitianOp partial_trace(const HermitianOp& rho, const Tps& tps, std::span<const int> keep);

SpectralDecomp spectral_decompose(const HermitianOp& a, double cluster_tol = kClusterTol);

/// Ascending eigenvalues without clustering.
RealVector eigenvalues(const HermitianOp& a);

/// S A S^dagger.
HermitianOp conjugate(const HermitianOp& a, const UnitaryOp& s);

/// exp(-i h t / hbar) from the eigen-decomposition of h.
UnitaryOp evolve(const HermitianOp& h, double t, double hbar = 1.0);

cplx expectation(const HermitianOp& a, const Ket& psi);
cplx inner(const Ket& a, const Ket& b);

double frobenius(const Matrix& m);
/// Largest singular value.
double operator_norm(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
/// Pauli string on n qubits, e.g. single(Z, site, n).
Matrix single(const Matrix& p, int site, int n);
}  // namespace pauli

}  // namespace qslab
