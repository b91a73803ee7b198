#pragma once

#include "entbroadcast/states.hpp"

namespace entbroadcast::measures {

using qmat::CMat;
using states::BlochState;

/// Entanglement detection threshold on the partially transposed spectrum.
inline constexpr double ppt_tol = 1e-10;

/// Classically achievable teleportation fidelity.
inline constexpr double classical_tf_limit = 2.0 / 3.0;

struct SeparabilityVerdict {
  double min_pt_eigenvalue;
  bool inseparable;  // min_pt_eigenvalue < -ppt_tol; exact for two qubits
};

/// Peres-Horodecki test: partial transpose on the second qubit.
SeparabilityVerdict ppt_verdict(const CMat& rho);

/// Maximal teleportation fidelity 1/2 [1 + 1/3 sum_i sqrt(u_i)], u_i the
/// eigenvalues of T^T T. Useful for teleportation when above 2/3.
double teleportation_fidelity(const BlochState& s);

enum class DcFormula {
  unclamped,  // 1 + S(rho_B) - S(rho_AB)
  clamped,    // max(1, unclamped)
};

const char* to_string(DcFormula f);

/// Dense-coding capacity in bits; rho_B is the receiver-side (second qubit)
/// marginal.
double dense_coding_capacity(const CMat& rho, DcFormula f = DcFormula::unclamped);

/// tr sqrt(sqrt(rho) sigma sqrt(rho)), the broadcasting fidelity.
double uhlmann_fidelity(const CMat& rho, const CMat& sigma);

/// TF(input) - TF(output); negative only when the map increased TF.
double delta_tf(const BlochState& input, const BlochState& output);

/// DC(input) - DC(output) under the chosen formula.
double delta_dc(const BlochState& input, const BlochState& output,
                DcFormula f = DcFormula::unclamped);

}  // namespace entbroadcast::measures
