#include "entbroadcast/states.hpp"

#include <cmath>

namespace entbroadcast::states {

using qmat::cxd;
using qmat::invalid_state_error;

const CMat& pauli(int i) {
  static const std::array<CMat, 4> sigma = [] {
    std::array<CMat, 4> s;
    for (auto& m : s) m = CMat::Zero(2, 2);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, cxd(0, -1), cxd(0, 1), 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return sigma.at(static_cast<std::size_t>(i));
}

CMat bloch_to_density(const BlochState& s) {
  CMat rho = CMat::Identity(4, 4);
  const CMat id2 = CMat::Identity(2, 2);
  for (int i = 0; i < 3; ++i) {
    rho += s.x[i] * qmat::kron(pauli(i + 1), id2);
    rho += s.y[i] * qmat::kron(id2, pauli(i + 1));
    for (int j = 0; j < 3; ++j) rho += s.t(i, j) * qmat::kron(pauli(i + 1), pauli(j + 1));
  }
  rho /= 4.0;
  qmat::require_density(rho);
  return rho;
}

BlochState density_to_bloch(const CMat& rho) {
  qmat::require_density(rho);
  if (rho.rows() != 4) throw qmat::shape_error("density_to_bloch: expected a 4x4 matrix");
  const CMat id2 = CMat::Identity(2, 2);
  BlochState s;
  for (int i = 0; i < 3; ++i) {
    s.x[i] = (rho * qmat::kron(pauli(i + 1), id2)).trace().real();
    s.y[i] = (rho * qmat::kron(id2, pauli(i + 1))).trace().real();
    for (int j = 0; j < 3; ++j)
      s.t(i, j) = (rho * qmat::kron(pauli(i + 1), pauli(j + 1))).trace().real();
  }
  return s;
}

BlochState werner_like(const WernerLikeParams& params) {
  if (!(params.p >= 0.0 && params.p <= 1.0))
    throw std::domain_error("werner_like: p must lie in [0, 1]");
  if (!(params.alpha2 >= 0.0 && params.alpha2 <= 1.0))
    throw std::domain_error("werner_like: alpha2 must lie in [0, 1]");
  const double beta2 = 1.0 - params.alpha2;
  const double alphabeta = std::sqrt(params.alpha2 * beta2);  // alpha, beta taken >= 0
  BlochState s;
  s.x = Eigen::Vector3d(0, 0, params.p * (params.alpha2 - beta2));
  s.y = s.x;
  s.t = Eigen::Vector3d(2 * params.p * alphabeta, -2 * params.p * alphabeta, params.p).asDiagonal();
  return s;
}

std::array<double, 4> bell_diagonal_eigenvalues(const BellDiagonalParams& params) {
  std::array<double, 4> lambda{};
  int k = 0;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      const double sm = (m == 0) ? 1.0 : -1.0;
      const double sn = (n == 0) ? 1.0 : -1.0;
      lambda[k++] = 0.25 * (1.0 + sm * params.c1 - sm * sn * params.c2 + sn * params.c3);
    }
  return lambda;
}

BlochState bell_diagonal(const BellDiagonalParams& params) {
  for (double c : {params.c1, params.c2, params.c3})
    if (!(c >= -1.0 && c <= 1.0))
      throw std::domain_error("bell_diagonal: coefficients must lie in [-1, 1]");
  for (double l : bell_diagonal_eigenvalues(params))
    if (l < -1e-12)
      throw invalid_state_error("bell_diagonal: parameters give a negative eigenvalue");
  BlochState s;
  s.t = Eigen::Vector3d(params.c1, params.c2, params.c3).asDiagonal();
  return s;
}

double purity(const BlochState& s) {
  return 0.25 * (1.0 + s.x.squaredNorm() + s.y.squaredNorm() + s.t.squaredNorm());
}

namespace {

BlochState sample_hilbert_schmidt(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cxd(gauss(rng), gauss(rng));
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return density_to_bloch(rho);
}

// Rejection sampler for the flat (uniform) distribution over the canonical
// parameter body. Naive accept/reject on the (x, y, T) box has acceptance
// ~5e-7, so the flat measure is drawn in its eigendecomposition instead:
// eigenvalues uniform on the simplex, accepted with weight proportional to
// the squared Vandermonde determinant, eigenvectors Haar. The result is the
// same distribution as the square-Ginibre construction.
BlochState sample_bloch_rejection(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // max of prod (l_i - l_j)^2 over the 4-simplex is ~3.35e-7
  constexpr double vandermonde_bound = 3.6e-7;

  Eigen::Vector4d lam;
  for (;;) {
    std::array<double, 5> cuts{0.0, u01(rng), u01(rng), u01(rng), 1.0};
    std::sort(cuts.begin(), cuts.end());
    for (int i = 0; i < 4; ++i) lam[i] = cuts[i + 1] - cuts[i];
    double w = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) w *= (lam[i] - lam[j]) * (lam[i] - lam[j]);
    if (u01(rng) * vandermonde_bound < w) break;
  }

  CMat g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));  // Haar phase fix

  const CMat rho = q * lam.cast<cxd>().asDiagonal() * q.adjoint();
  return density_to_bloch(rho);
}

}  // namespace

BlochState sample_random_state(std::mt19937_64& rng, Sampler sampler) {
  switch (sampler) {
    case Sampler::hilbert_schmidt:
      return sample_hilbert_schmidt(rng);
    case Sampler::bloch_rejection:
      return sample_bloch_rejection(rng);
  }
  throw std::invalid_argument("sample_random_state: unknown sampler");
}

BlochState sample_random_state(std::uint64_t seed, Sampler sampler) {
  std::mt19937_64 rng(seed);
  return sample_random_state(rng, sampler);
}

}  // namespace entbroadcast::states
