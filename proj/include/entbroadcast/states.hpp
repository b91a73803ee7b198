#pragma once

#include "entbroadcast/qmat.hpp"

#include <cstdint>
#include <random>

namespace entbroadcast::states {

using qmat::CMat;

/// Pauli matrix sigma_i, i in {0 (identity), 1, 2, 3}.
const CMat& pauli(int i);

/// Canonical two-qubit state rho = 1/4 [ I + sum_i x_i s_i x I
///                                         + sum_i y_i I x s_i
///                                         + sum_ij t_ij s_i x s_j ].
struct BlochState {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
};

/// Mixture of alpha|00> + beta|11> (alpha, beta >= 0, alpha^2 + beta^2 = 1)
/// with the maximally mixed state, weight p on the pure part.
struct WernerLikeParams {
  double p;
  double alpha2;
};

/// Diagonal correlation matrix diag(c1, c2, c3), zero Bloch vectors.
struct BellDiagonalParams {
  double c1, c2, c3;
};

/// Throws invalid_state_error if the reconstruction is not PSD.
CMat bloch_to_density(const BlochState& s);

BlochState density_to_bloch(const CMat& rho);

/// Throws std::domain_error if p or alpha2 is outside [0, 1].
BlochState werner_like(const WernerLikeParams& params);

/// Eigenvalues lambda_mn = 1/4 [1 + (-1)^m c1 - (-1)^(m+n) c2 + (-1)^n c3],
/// ordered (m,n) = (0,0), (0,1), (1,0), (1,1).
std::array<double, 4> bell_diagonal_eigenvalues(const BellDiagonalParams& params);

/// Throws invalid_state_error if any lambda_mn is negative.
BlochState bell_diagonal(const BellDiagonalParams& params);

/// Tr[rho^2] = 1/4 (1 + |x|^2 + |y|^2 + |T|_F^2), in [1/4, 1].
double purity(const BlochState& s);

enum class Sampler {
  hilbert_schmidt,  // rho = G G^dag / tr, G a 4x4 standard complex Gaussian
  bloch_rejection,  // flat measure over the canonical-parameter body, drawn by
                    // rejection on the eigenvalue simplex with Haar eigenvectors;
                    // distributionally equal to hilbert_schmidt
};

BlochState sample_random_state(std::mt19937_64& rng, Sampler sampler = Sampler::hilbert_schmidt);
BlochState sample_random_state(std::uint64_t seed, Sampler sampler = Sampler::hilbert_schmidt);

}  // namespace entbroadcast::states
