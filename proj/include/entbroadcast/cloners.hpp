#pragma once

#include "entbroadcast/states.hpp"

#include <array>
#include <optional>
#include <unordered_map>
#include <vector>

namespace entbroadcast::cloners {

using qmat::CMat;
using states::BlochState;

enum class Kind { local, nonlocal };

const char* to_string(Kind k);

// ---------------------------------------------------------------------------
// Local symmetric 1->2 cloner (each party clones its own qubit).
//
// Qubit labels follow the broadcasting convention: party A holds the original
// qubit 1 and its clone, qubit 3; party B holds qubit 2 and its clone,
// qubit 4. Cross pairs (1,4) and (2,3) are the broadcast output, the
// same-party pairs (1,3) and (2,4) are the side product. All reduced pairs
// returned by this module are ordered (A qubit, B qubit) where applicable.
// ---------------------------------------------------------------------------

/// Amplitude alpha_j = sqrt(2(N-j)/(N(N+1))) of the j-error sector of the
/// symmetric single-qubit 1->N cloner.
double local_amplitude(int n_copies, int j);

struct LocalClonerSpec {
  int n_copies;                  // 2 only; local broadcasting fails beyond two copies
  std::array<double, 2> alpha;   // sector amplitudes alpha_0, alpha_1
};

/// Throws std::domain_error unless n_copies == 2.
LocalClonerSpec local_cloner_spec(int n_copies = 2);

/// The 8x2 single-qubit cloning isometry, output ordered (clone1, clone2,
/// machine qubit).
CMat local_isometry();

/// Full six-qubit state after both parties clone, subsystem order
/// [A clone1, A clone2, A machine, B clone1, B clone2, B machine].
CMat local_clone_output(const CMat& rho4);

// ---------------------------------------------------------------------------
// Nonlocal symmetric 1->N cloner of the full two-qubit (4-dimensional) system.
//
// Outputs are represented in an occupation-number basis over the four input
// basis states: copies carry N particles, the machine carries N-1. A column
// for basis input i is a sum over error patterns e (a multiset of basis
// states other than i, |e| = j <= N-1): the copies hold N-j particles in mode
// i plus the pattern e, the machine holds N-1-j particles in mode i plus the
// same pattern, with amplitude sqrt((N-j)/Z). Sharing the pattern between
// copies and machine is what makes cross terms between different input
// columns exact rather than assumed orthogonal.
// ---------------------------------------------------------------------------

/// Occupation-number basis of `particles` bosons in 4 modes, lexicographic.
class SymBasis {
 public:
  explicit SymBasis(int particles);

  int particles() const { return particles_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const std::array<int, 4>& occupation(int index) const { return states_[index]; }
  int index(const std::array<int, 4>& occ) const;

 private:
  int particles_;
  std::vector<std::array<int, 4>> states_;
  std::unordered_map<int, int> lookup_;
};

struct NonlocalClonerSpec {
  int n_copies;                // 2..5
  std::vector<double> alpha;   // sector probabilities alpha_j, j = 0..N-1
};

/// alpha_j = (N-j) n_j / sum_j (N-j) n_j with n_j the number of size-j error
/// multisets over the three complementary basis states. Throws
/// std::domain_error for n_copies outside 2..5.
NonlocalClonerSpec nonlocal_cloner_spec(int n_copies);

struct NonlocalIsometry {
  struct Branch {
    int copies_index;
    int machine_index;
    double amp;
  };

  int n_copies;
  SymBasis copies;   // N particles
  SymBasis machine;  // N-1 particles
  std::array<std::vector<Branch>, 4> columns;

  // One- and two-copy transfer tensors: marginal(rho) = sum_(i,i') rho(i,i') T[i][i'].
  std::array<std::array<Eigen::Matrix4d, 4>, 4> transfer1;
  std::array<std::array<Eigen::MatrixXd, 4>, 4> transfer2;  // 16x16 each

  /// Dense (copies.dim * machine.dim) x 4 column matrix.
  Eigen::MatrixXd matrix() const;
};

/// Cached immutable isometry for n_copies in 2..5.
const NonlocalIsometry& nonlocal_isometry(int n_copies);

/// Reduced state of a single copy (a full two-qubit system), trace 1.
CMat one_copy_marginal(const NonlocalIsometry& iso, const CMat& rho4);

/// Reduced state of an ordered pair of distinct copies, 16x16 on
/// (copy k) x (copy k'), trace 1.
CMat two_copy_marginal(const NonlocalIsometry& iso, const CMat& rho4);

// ---------------------------------------------------------------------------
// Clone application
// ---------------------------------------------------------------------------

struct ShrinkFactors {
  std::optional<double> eta_x;  // least-squares ratio over Bloch vectors x, y
  std::optional<double> eta_t;  // least-squares ratio over correlation matrices
  double max_spread = 0.0;      // spread of componentwise ratios (significant components)
};

struct CloneOutput {
  BlochState desired_pair;  // broadcast pair: (1,4)/(2,3) local, one copy nonlocal
  BlochState side_pair;     // (1,3): first qubits of the cloned systems
  BlochState side_pair_b;   // (2,4): second qubits; equals side_pair when x == y
  ShrinkFactors shrink;
};

CloneOutput local_clone(const BlochState& rho);

CloneOutput nonlocal_clone(const BlochState& rho, int n_copies);

/// Ratios of output to input Bloch components of the desired pair. Throws
/// std::domain_error when the input has neither Bloch vectors nor
/// correlations to measure against.
ShrinkFactors shrink_factors(const CloneOutput& out, const BlochState& input);

}  // namespace entbroadcast::cloners
