#include "qslab/commutant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qslab/errors.hpp"
#include "qslab/random.hpp"

namespace qslab {

CommutantBasis commutant_basis(const HermitianOp& h, double cluster_tol) {
  CommutantBasis cb;
  cb.source_spectrum = spectral_decompose(h, cluster_tol);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (const Matrix& v : cb.source_spectrum.eigenbases) {
    const int m = static_cast<int>(v.cols());
    cb.dim_total += m * m;
    auto lift = [&](const Matrix& e) {
      cb.generators.push_back(HermitianOp::from_hermitian_part(v * e * v.adjoint()));
    };
    for (int j = 0; j < m; ++j) {
      Matrix e = Matrix::Zero(m, m);
      e(j, j) = 1.0;
      lift(e);
    }
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Matrix sym = Matrix::Zero(m, m);
        sym(j, k) = sym(k, j) = inv_sqrt2;
        lift(sym);
        Matrix asym = Matrix::Zero(m, m);
        asym(j, k) = cplx(0, -inv_sqrt2);
        asym(k, j) = cplx(0, inv_sqrt2);
        lift(asym);
      }
  }
  return cb;
}

namespace {

// Distance from S to the sampled time orbit {exp(-i H t)} modulo global phase,
// using tr(U_t^dagger S) = sum_c exp(i lambda_c t) tr(P_c S).
double time_orbit_distance(const SpectralDecomp& sd, const Matrix& s, const TimeOrbitGrid& grid) {
  const int d = sd.dim();
  std::vector<cplx> weights;
  for (const auto& p : sd.projectors) weights.push_back((p.matrix() * s).trace());
  double best = 0.0;
  const int n = std::max(grid.points, 2);
  for (int k = 0; k < n; ++k) {
    const double t = -grid.t_max + 2.0 * grid.t_max * k / (n - 1);
    cplx z = 0.0;
    for (std::size_t c = 0; c < weights.size(); ++c) z += std::polar(1.0, sd.eigenvalues[c] * t) * weights[c];
    best = std::max(best, std::abs(z));
  }
  return std::sqrt(std::max(0.0, 2.0 * d - 2.0 * best));
}

bool has_off_orbit_directions(const SpectralDecomp& sd) {
  for (int m : sd.multiplicities)
    if (m > 1) return true;
  return sd.eigenvalues.size() >= 3;
}

}  // namespace

CommutantSample sample_commutant_unitary(const CommutantBasis& cb, std::uint64_t seed, bool exclude_time_orbit,
                                         const TimeOrbitGrid& grid) {
  const int d = cb.source_spectrum.dim();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&] {
    Matrix g = Matrix::Zero(d, d);
    for (const auto& gen : cb.generators) g += normal(rng) * gen.matrix();
    return evolve(HermitianOp::from_hermitian_part(g), 1.0);
  };

  CommutantSample out;
  if (!exclude_time_orbit) {
    out.unitary = draw();
    out.attempts = 1;
    return out;
  }
  if (!has_off_orbit_directions(cb.source_spectrum)) {
    out.available = false;
    return out;
  }
  for (int attempt = 1; attempt <= grid.max_attempts; ++attempt) {
    UnitaryOp s = draw();
    const double dist = time_orbit_distance(cb.source_spectrum, s.matrix(), grid);
    out.attempts = attempt;
    out.orbit_distance = dist;
    if (dist > grid.threshold) {
      out.unitary = std::move(s);
      return out;
    }
  }
  out.available = false;
  return out;
}

UnitaryOp time_evolution(const HermitianOp& h, double t, double t0, double hbar) {
  return evolve(h, t - t0, hbar);
}

const char* to_string(ErgodicityVerdict v) {
  switch (v) {
    case ErgodicityVerdict::NotErgodicDegenerate:
      return "NotErgodicDegenerate";
    case ErgodicityVerdict::NotErgodicRationalRelation:
      return "NotErgodicRationalRelation";
    case ErgodicityVerdict::ErgodicAtBound:
      return "ErgodicAtBound";
  }
  return "?";
}

ErgodicityReport ergodicity_report(const HermitianOp& h, int coefficient_bound, double tolerance,
                                   double cluster_tol) {
  if (h.dim() > kErgodicityMaxDim)
    throw CapacityError("ergodicity_report: exhaustive search supports dim <= " +
                        std::to_string(kErgodicityMaxDim));
  if (coefficient_bound < 1) throw ArgumentError("ergodicity_report: coefficient bound must be >= 1");

  ErgodicityReport rep;
  rep.coefficient_bound = coefficient_bound;
  rep.tolerance = tolerance;

  const RealVector raw = eigenvalues(h);
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < raw.size(); ++i) rep.min_gap = std::min(rep.min_gap, raw[i] - raw[i - 1]);
  if (raw.size() < 2) rep.min_gap = 0.0;

  const SpectralDecomp sd = spectral_decompose(h, cluster_tol);
  rep.degenerate = std::any_of(sd.multiplicities.begin(), sd.multiplicities.end(), [](int m) { return m > 1; });
  rep.eigenvalues = sd.eigenvalues;

  const int n = static_cast<int>(sd.eigenvalues.size());
  if (n >= 2) {
    const int width = 2 * coefficient_bound + 1;
    if (std::pow(static_cast<double>(width), n - 1) > kErgodicityMaxCandidates)
      throw CapacityError("ergodicity_report: relation search space too large for exhaustive enumeration");

    // Odometer over k_0..k_{n-2}; the last coefficient closes sum(k) = 0.
    std::vector<int> k(n, -coefficient_bound);
    const double last = sd.eigenvalues[n - 1];
    while (true) {
      int partial = 0;
      double value = 0.0;
      for (int i = 0; i < n - 1; ++i) {
        partial += k[i];
        value += k[i] * sd.eigenvalues[i];
      }
      const int closing = -partial;
      if (std::abs(closing) <= coefficient_bound) {
        const bool nonzero = closing != 0 || std::any_of(k.begin(), k.end() - 1, [](int c) { return c != 0; });
        if (nonzero && std::abs(value + closing * last) < tolerance) {
          std::vector<int> rel(k.begin(), k.end() - 1);
          rel.push_back(closing);
          rep.relations_found.push_back(std::move(rel));
        }
      }
      int pos = n - 2;
      while (pos >= 0 && k[pos] == coefficient_bound) k[pos--] = -coefficient_bound;
      if (pos < 0) break;
      ++k[pos];
    }
  }

  if (rep.degenerate)
    rep.verdict = ErgodicityVerdict::NotErgodicDegenerate;
  else if (!rep.relations_found.empty())
    rep.verdict = ErgodicityVerdict::NotErgodicRationalRelation;
  else
    rep.verdict = ErgodicityVerdict::ErgodicAtBound;
  return rep;
}

double phase_invariant_distance(const UnitaryOp& u, const UnitaryOp& target) {
  if (u.dim() != target.dim()) throw ArgumentError("phase_invariant_distance: dimension mismatch");
  const cplx z = (u.matrix().adjoint() * target.matrix()).trace();
  const cplx phase = std::abs(z) > 0.0 ? z / std::abs(z) : cplx(1.0);
  return (phase * u.matrix() - target.matrix()).norm();
}

OrbitFit orbit_approximation(const HermitianOp& h, const UnitaryOp& target, double t_max, long long steps) {
  if (h.dim() != target.dim()) throw ArgumentError("orbit_approximation: dimension mismatch");
  if (steps < 1) throw ArgumentError("orbit_approximation: steps must be >= 1");
  if (commutator(h.matrix(), target.matrix()).norm() > 1e-8)
    throw ArgumentError("orbit_approximation: target does not commute with h");

  const SpectralDecomp sd = spectral_decompose(h);
  std::vector<cplx> weights;
  for (const auto& p : sd.projectors) weights.push_back((p.matrix() * target.matrix()).trace());

  OrbitFit fit;
  double best = -1.0;
  for (long long k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 0.0 : -t_max + 2.0 * t_max * static_cast<double>(k) / static_cast<double>(steps - 1);
    cplx z = 0.0;
    for (std::size_t c = 0; c < weights.size(); ++c) z += std::polar(1.0, sd.eigenvalues[c] * t) * weights[c];
    const double score = std::abs(z);
    if (score > best) {
      best = score;
      fit.t_best = t;
    }
  }
  fit.distance = phase_invariant_distance(evolve(h, fit.t_best), target);
  return fit;
}

}  // namespace qslab
