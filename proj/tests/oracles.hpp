#pragma once

// Brute-force oracle for the nonlocal cloner: expands the occupation-number
// columns into the full (C^4)^n x (C^4)^(n-1) tensor space and reduces pairs
// with plain partial traces. Independent of the transfer-tensor path it
// checks; usable for n = 2, 3 (the full density matrix is materialized).

#include "entbroadcast/cloners.hpp"

#include <algorithm>
#include <vector>

namespace testutil {

using entbroadcast::cloners::NonlocalIsometry;
using entbroadcast::qmat::CMat;
using entbroadcast::qmat::cxd;

// Normalized symmetric expansion of an occupation vector over `particles`
// slots, first slot most significant.
inline Eigen::VectorXcd expand_occupation(const std::array<int, 4>& occ, int particles) {
  std::vector<int> modes;
  for (int m = 0; m < 4; ++m) modes.insert(modes.end(), occ[m], m);
  std::sort(modes.begin(), modes.end());

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1L << (2 * particles));
  int arrangements = 0;
  do {
    long idx = 0;
    for (int k = 0; k < particles; ++k) idx = idx * 4 + modes[k];
    v[idx] += 1.0;
    ++arrangements;
  } while (std::next_permutation(modes.begin(), modes.end()));
  return v / std::sqrt(static_cast<double>(arrangements));
}

inline Eigen::MatrixXcd brute_isometry(const NonlocalIsometry& iso) {
  const int n = iso.n_copies;
  const long cop_dim = 1L << (2 * n);
  const long mach_dim = 1L << (2 * (n - 1));
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(cop_dim * mach_dim, 4);
  for (int i = 0; i < 4; ++i)
    for (const auto& br : iso.columns[i]) {
      const auto cop = expand_occupation(iso.copies.occupation(br.copies_index), n);
      const auto mach = expand_occupation(iso.machine.occupation(br.machine_index), n - 1);
      for (long a = 0; a < cop_dim; ++a) {
        if (cop[a] == cxd(0, 0)) continue;
        for (long b = 0; b < mach_dim; ++b)
          if (mach[b] != cxd(0, 0)) v(a * mach_dim + b, i) += br.amp * cop[a] * mach[b];
      }
    }
  return v;
}

struct BrutePairs {
  CMat copy1, copy2;    // full two-qubit copies
  CMat side13, side24;  // cross-copy qubit pairs
};

inline BrutePairs brute_pairs(const NonlocalIsometry& iso, const CMat& rho4) {
  const int n = iso.n_copies;
  const Eigen::MatrixXcd v = brute_isometry(iso);
  const Eigen::MatrixXcd full = v * rho4 * v.adjoint();

  entbroadcast::qmat::SubsystemShape shape;
  for (int q = 0; q < 2 * n; ++q) shape.dims.push_back(2);
  shape.dims.push_back(1 << (2 * (n - 1)));  // machine, one lump

  BrutePairs out;
  out.copy1 = entbroadcast::qmat::partial_trace(full, shape, {0, 1});
  out.copy2 = entbroadcast::qmat::partial_trace(full, shape, {2, 3});
  out.side13 = entbroadcast::qmat::partial_trace(full, shape, {0, 2});
  out.side24 = entbroadcast::qmat::partial_trace(full, shape, {1, 3});
  return out;
}

}  // namespace testutil
