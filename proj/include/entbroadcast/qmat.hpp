#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace entbroadcast::qmat {

using cxd = std::complex<double>;

/// Dense complex matrix, row/column semantics as in Eigen.
using CMat = Eigen::MatrixXcd;

/// Thrown when a matrix fails a physical-state requirement (Hermiticity,
/// positivity, unit trace).
class invalid_state_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when subsystem dimensions do not match the matrix.
class shape_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Tolerance ladder. Hermiticity is a representation property and held tight;
// eigenvalues inside [eig_clamp, 0) are treated as rounding noise and clamped;
// anything below state_reject_threshold is genuine negativity and rejected.
inline constexpr double hermiticity_tol = 1e-12;
inline constexpr double eig_clamp_tol = 1e-10;
inline constexpr double state_reject_threshold = -1e-8;

/// Ordered local dimensions of a tensor-product space, subsystem 0 most
/// significant (row-major index composition).
struct SubsystemShape {
  std::vector<int> dims;

  int total() const;
  void require_matches(const CMat& m) const;
};

bool is_hermitian(const CMat& m, double tol = hermiticity_tol);

/// Throws invalid_state_error unless m is Hermitian, unit trace and has no
/// eigenvalue below state_reject_threshold.
void require_density(const CMat& m);

CMat kron(const CMat& a, const CMat& b);

/// Reduced matrix on the subsystems listed in `keep` (0-based). The order of
/// `keep` defines the subsystem order of the result, so a reordered keep list
/// doubles as a subsystem permutation.
CMat partial_trace(const CMat& m, const SubsystemShape& shape, const std::vector<int>& keep);

/// Transpose of the chosen factor of a bipartite system (sub is 0 or 1).
CMat partial_transpose(const CMat& m, const SubsystemShape& shape, int sub);

struct EigResult {
  Eigen::VectorXd values;  // ascending
  CMat vectors;            // columns, same order
};

/// Eigendecomposition of a Hermitian matrix. Rejects inputs whose
/// anti-Hermitian part exceeds hermiticity_tol.
EigResult herm_eig(const CMat& m);

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// [state_reject_threshold, 0) are clamped to zero; lower ones are an error.
CMat psd_sqrt(const CMat& m);

/// -sum lambda log2 lambda of a density matrix, in bits. 0 log 0 := 0.
double von_neumann_entropy(const CMat& rho);

}  // namespace entbroadcast::qmat
