#include "entbroadcast/measures.hpp"

#include <cmath>

namespace entbroadcast::measures {

using qmat::SubsystemShape;

SeparabilityVerdict ppt_verdict(const CMat& rho) {
  qmat::require_density(rho);
  if (rho.rows() != 4) throw qmat::shape_error("ppt_verdict: expected a two-qubit state");
  const CMat pt = qmat::partial_transpose(rho, SubsystemShape{{2, 2}}, 1);
  const auto eig = qmat::herm_eig(pt);
  const double min_eig = eig.values.minCoeff();
  return {min_eig, min_eig < -ppt_tol};
}

double teleportation_fidelity(const BlochState& s) {
  const Eigen::Vector3d sv = s.t.jacobiSvd().singularValues();
  return 0.5 * (1.0 + sv.sum() / 3.0);
}

const char* to_string(DcFormula f) {
  return f == DcFormula::unclamped ? "unclamped" : "clamped";
}

double dense_coding_capacity(const CMat& rho, DcFormula f) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw qmat::shape_error("dense_coding_capacity: expected a two-qubit state");
  const CMat rho_b = qmat::partial_trace(rho, SubsystemShape{{2, 2}}, {1});
  const double dc = 1.0 + qmat::von_neumann_entropy(rho_b) - qmat::von_neumann_entropy(rho);
  return f == DcFormula::clamped ? std::max(1.0, dc) : dc;
}

double uhlmann_fidelity(const CMat& rho, const CMat& sigma) {
  qmat::require_density(rho);
  qmat::require_density(sigma);
  if (rho.rows() != sigma.rows())
    throw qmat::shape_error("uhlmann_fidelity: dimension mismatch");
  const CMat root = qmat::psd_sqrt(rho);
  CMat inner = root * sigma * root;
  inner = (inner + CMat(inner.adjoint())) / 2.0;
  const auto eig = qmat::herm_eig(inner);
  double fb = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    fb += std::sqrt(std::max(eig.values[i], 0.0));
  return fb;
}

double delta_tf(const BlochState& input, const BlochState& output) {
  return teleportation_fidelity(input) - teleportation_fidelity(output);
}

double delta_dc(const BlochState& input, const BlochState& output, DcFormula f) {
  return dense_coding_capacity(states::bloch_to_density(input), f) -
         dense_coding_capacity(states::bloch_to_density(output), f);
}

}  // namespace entbroadcast::measures
