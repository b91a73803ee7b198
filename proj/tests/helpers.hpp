#pragma once

#include "entbroadcast/states.hpp"

#include <random>

namespace testutil {

using entbroadcast::qmat::CMat;
using entbroadcast::qmat::cxd;

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_diff(const CMat& a, const CMat& b) { return max_abs(a - b); }

inline CMat random_complex(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cxd(g(rng), g(rng));
  return m;
}

inline CMat random_hermitian(std::mt19937_64& rng, int dim) {
  const CMat m = random_complex(rng, dim, dim);
  return (m + m.adjoint()) / 2.0;
}

inline CMat random_density(std::mt19937_64& rng, int dim) {
  const CMat g = random_complex(rng, dim, dim);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline CMat bell_phi_plus() {
  CMat rho = CMat::Zero(4, 4);
  for (int a : {0, 3})
    for (int b : {0, 3}) rho(a, b) = 0.5;
  return rho;
}

inline double bloch_state_diff(const entbroadcast::states::BlochState& a,
                               const entbroadcast::states::BlochState& b) {
  double d = (a.x - b.x).cwiseAbs().maxCoeff();
  d = std::max(d, (a.y - b.y).cwiseAbs().maxCoeff());
  return std::max(d, (a.t - b.t).cwiseAbs().maxCoeff());
}

}  // namespace testutil
