#include "entbroadcast/cloners.hpp"

#include <cmath>
#include <memory>
#include <mutex>

namespace entbroadcast::cloners {

using qmat::cxd;
using qmat::SubsystemShape;

const char* to_string(Kind k) { return k == Kind::local ? "local" : "nonlocal"; }

double local_amplitude(int n_copies, int j) {
  return std::sqrt(2.0 * (n_copies - j) / (n_copies * (n_copies + 1.0)));
}

LocalClonerSpec local_cloner_spec(int n_copies) {
  if (n_copies != 2) {
    throw std::domain_error(
        "local cloner: only 2 copies supported; local output pairs stay separable beyond that");
  }
  return {2, {local_amplitude(2, 0), local_amplitude(2, 1)}};
}

CMat local_isometry() {
  const auto spec = local_cloner_spec();
  const double a0 = spec.alpha[0];
  const double a1 = spec.alpha[1] / std::sqrt(2.0);  // split over |01>+|10>
  CMat u = CMat::Zero(8, 2);
  // index (clone1, clone2, machine) -> 4 c1 + 2 c2 + m
  u(0b000, 0) = a0;  // |00>|0*>
  u(0b011, 0) = a1;  // |01>|1*>
  u(0b101, 0) = a1;  // |10>|1*>
  u(0b111, 1) = a0;  // |11>|1*>
  u(0b010, 1) = a1;  // |01>|0*>
  u(0b100, 1) = a1;  // |10>|0*>
  return u;
}

CMat local_clone_output(const CMat& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4)
    throw qmat::shape_error("local_clone_output: expected a 4x4 matrix");
  const CMat u = local_isometry();
  const CMat w = qmat::kron(u, u);  // 64x4, ordered [Ac1, Ac2, Am, Bc1, Bc2, Bm]
  return w * rho4 * w.adjoint();
}

// ---------------------------------------------------------------------------
// Occupation-number machinery
// ---------------------------------------------------------------------------

namespace {

int pack(const std::array<int, 4>& occ, int base) {
  return ((occ[0] * base + occ[1]) * base + occ[2]) * base + occ[3];
}

}  // namespace

SymBasis::SymBasis(int particles) : particles_(particles) {
  const int base = particles + 2;
  for (int a = 0; a <= particles; ++a)
    for (int b = 0; b <= particles - a; ++b)
      for (int c = 0; c <= particles - a - b; ++c) {
        std::array<int, 4> occ{a, b, c, particles - a - b - c};
        lookup_.emplace(pack(occ, base), static_cast<int>(states_.size()));
        states_.push_back(occ);
      }
}

int SymBasis::index(const std::array<int, 4>& occ) const {
  const auto it = lookup_.find(pack(occ, particles_ + 2));
  if (it == lookup_.end()) throw std::out_of_range("SymBasis: occupation not in basis");
  return it->second;
}

NonlocalClonerSpec nonlocal_cloner_spec(int n_copies) {
  if (n_copies < 2 || n_copies > 5)
    throw std::domain_error("nonlocal cloner: copies must lie in 2..5");
  const int n = n_copies;
  NonlocalClonerSpec spec;
  spec.n_copies = n;
  spec.alpha.resize(n);
  double z = 0.0;
  for (int j = 0; j < n; ++j) {
    const double multisets = (j + 1) * (j + 2) / 2.0;  // size-j multisets over 3 modes
    spec.alpha[j] = (n - j) * multisets;
    z += spec.alpha[j];
  }
  for (double& a : spec.alpha) a /= z;
  return spec;
}

namespace {

// a^dag_create a_annihilate applied along `ops`; returns the matched column
// amplitude factor, or 0 if an annihilation hits an empty mode.
struct OccWalk {
  std::array<int, 4> occ;
  double factor = 1.0;

  bool annihilate(int mode) {
    if (occ[mode] == 0) return false;
    factor *= std::sqrt(static_cast<double>(occ[mode]));
    --occ[mode];
    return true;
  }
  void create(int mode) {
    ++occ[mode];
    factor *= std::sqrt(static_cast<double>(occ[mode]));
  }
};

std::unique_ptr<NonlocalIsometry> build_isometry(int n) {
  const auto spec = nonlocal_cloner_spec(n);
  auto iso = std::make_unique<NonlocalIsometry>(
      NonlocalIsometry{n, SymBasis(n), SymBasis(n - 1), {}, {}, {}});

  double z = 0.0;
  for (int j = 0; j < n; ++j) z += (n - j) * (j + 1) * (j + 2) / 2.0;

  for (int i = 0; i < 4; ++i) {
    std::array<int, 3> others{};
    int k = 0;
    for (int l = 0; l < 4; ++l)
      if (l != i) others[k++] = l;

    for (int e0 = 0; e0 <= n - 1; ++e0)
      for (int e1 = 0; e1 <= n - 1 - e0; ++e1)
        for (int e2 = 0; e2 <= n - 1 - e0 - e1; ++e2) {
          const int j = e0 + e1 + e2;
          std::array<int, 4> err{};
          err[others[0]] = e0;
          err[others[1]] = e1;
          err[others[2]] = e2;

          auto cop = err;
          cop[i] += n - j;
          auto mach = err;
          mach[i] += n - 1 - j;

          iso->columns[i].push_back(
              {iso->copies.index(cop), iso->machine.index(mach), std::sqrt((n - j) / z)});
        }
  }

  // Transfer tensors: matrix elements of a^dag_b a_a (one copy) and
  // a^dag_b a^dag_d a_c a_a (two copies) between columns, machine contracted.
  const int md = iso->machine.dim();
  std::array<std::unordered_map<long long, double>, 4> lookup;
  for (int i = 0; i < 4; ++i)
    for (const auto& br : iso->columns[i])
      lookup[i].emplace(static_cast<long long>(br.copies_index) * md + br.machine_index, br.amp);
  const auto column_amp = [&](int i, int cop, int mach) -> double {
    const auto it = lookup[i].find(static_cast<long long>(cop) * md + mach);
    return it == lookup[i].end() ? 0.0 : it->second;
  };

  for (int i = 0; i < 4; ++i)
    for (int ip = 0; ip < 4; ++ip) {
      Eigen::Matrix4d t1 = Eigen::Matrix4d::Zero();
      Eigen::MatrixXd t2 = Eigen::MatrixXd::Zero(16, 16);
      for (const auto& br : iso->columns[i]) {
        const auto& occ0 = iso->copies.occupation(br.copies_index);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            OccWalk w{occ0};
            if (!w.annihilate(a)) continue;
            w.create(b);
            const double amp = column_amp(ip, iso->copies.index(w.occ), br.machine_index);
            if (amp != 0.0) t1(a, b) += br.amp * amp * w.factor / n;
          }
        for (int a = 0; a < 4; ++a)
          for (int c = 0; c < 4; ++c)
            for (int b = 0; b < 4; ++b)
              for (int d = 0; d < 4; ++d) {
                OccWalk w{occ0};
                if (!w.annihilate(a) || !w.annihilate(c)) continue;
                w.create(d);
                w.create(b);
                const double amp = column_amp(ip, iso->copies.index(w.occ), br.machine_index);
                if (amp != 0.0)
                  t2(a * 4 + c, b * 4 + d) += br.amp * amp * w.factor / (n * (n - 1.0));
              }
      }
      iso->transfer1[i][ip] = t1;
      iso->transfer2[i][ip] = t2;
    }
  return iso;
}

}  // namespace

Eigen::MatrixXd NonlocalIsometry::matrix() const {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(copies.dim() * machine.dim(), 4);
  for (int i = 0; i < 4; ++i)
    for (const auto& br : columns[i])
      v(static_cast<Eigen::Index>(br.copies_index) * machine.dim() + br.machine_index, i) +=
          br.amp;
  return v;
}

const NonlocalIsometry& nonlocal_isometry(int n_copies) {
  if (n_copies < 2 || n_copies > 5)
    throw std::domain_error("nonlocal cloner: copies must lie in 2..5");
  static std::array<std::unique_ptr<NonlocalIsometry>, 4> cache;
  static std::array<std::once_flag, 4> flags;
  const int slot = n_copies - 2;
  std::call_once(flags[slot], [&] { cache[slot] = build_isometry(n_copies); });
  return *cache[slot];
}

CMat one_copy_marginal(const NonlocalIsometry& iso, const CMat& rho4) {
  CMat m = CMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int ip = 0; ip < 4; ++ip) {
      const cxd w = rho4(i, ip);
      if (w == cxd(0, 0)) continue;
      m += w * iso.transfer1[i][ip].cast<cxd>();
    }
  return m;
}

CMat two_copy_marginal(const NonlocalIsometry& iso, const CMat& rho4) {
  CMat m = CMat::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int ip = 0; ip < 4; ++ip) {
      const cxd w = rho4(i, ip);
      if (w == cxd(0, 0)) continue;
      m += w * iso.transfer2[i][ip].cast<cxd>();
    }
  return m;
}

// ---------------------------------------------------------------------------
// Clone application
// ---------------------------------------------------------------------------

namespace {

ShrinkFactors shrink_factors_impl(const CloneOutput& out, const BlochState& input) {
  ShrinkFactors f;
  double bloch_num = 0.0, bloch_den = 0.0;
  for (int i = 0; i < 3; ++i) {
    bloch_num += out.desired_pair.x[i] * input.x[i] + out.desired_pair.y[i] * input.y[i];
    bloch_den += input.x[i] * input.x[i] + input.y[i] * input.y[i];
  }
  if (bloch_den > 1e-18) f.eta_x = bloch_num / bloch_den;

  const double corr_num = (out.desired_pair.t.cwiseProduct(input.t)).sum();
  const double corr_den = input.t.squaredNorm();
  if (corr_den > 1e-18) f.eta_t = corr_num / corr_den;

  double lo = 0.0, hi = 0.0;
  bool seen = false;
  const auto consider = [&](double in_c, double out_c) {
    if (std::abs(in_c) <= 1e-6) return;
    const double r = out_c / in_c;
    if (!seen) {
      lo = hi = r;
      seen = true;
    } else {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  };
  for (int i = 0; i < 3; ++i) {
    consider(input.x[i], out.desired_pair.x[i]);
    consider(input.y[i], out.desired_pair.y[i]);
    for (int j = 0; j < 3; ++j) consider(input.t(i, j), out.desired_pair.t(i, j));
  }
  f.max_spread = seen ? hi - lo : 0.0;
  return f;
}

}  // namespace

CloneOutput local_clone(const BlochState& rho) {
  const CMat rho4 = states::bloch_to_density(rho);
  const CMat full = local_clone_output(rho4);
  const SubsystemShape six{{2, 2, 2, 2, 2, 2}};  // [Ac1, Ac2, Am, Bc1, Bc2, Bm]

  CloneOutput out;
  out.desired_pair = states::density_to_bloch(qmat::partial_trace(full, six, {0, 4}));
  out.side_pair = states::density_to_bloch(qmat::partial_trace(full, six, {0, 1}));
  out.side_pair_b = states::density_to_bloch(qmat::partial_trace(full, six, {3, 4}));
  out.shrink = shrink_factors_impl(out, rho);
  return out;
}

CloneOutput nonlocal_clone(const BlochState& rho, int n_copies) {
  const auto& iso = nonlocal_isometry(n_copies);
  const CMat rho4 = states::bloch_to_density(rho);

  CloneOutput out;
  out.desired_pair = states::density_to_bloch(one_copy_marginal(iso, rho4));
  const CMat pair2 = two_copy_marginal(iso, rho4);
  const SubsystemShape four{{2, 2, 2, 2}};  // (q1, q2) of copy k, (q1, q2) of copy k'
  out.side_pair = states::density_to_bloch(qmat::partial_trace(pair2, four, {0, 2}));
  out.side_pair_b = states::density_to_bloch(qmat::partial_trace(pair2, four, {1, 3}));
  out.shrink = shrink_factors_impl(out, rho);
  return out;
}

ShrinkFactors shrink_factors(const CloneOutput& out, const BlochState& input) {
  ShrinkFactors f = shrink_factors_impl(out, input);
  if (!f.eta_x && !f.eta_t)
    throw std::domain_error("shrink_factors: input has no nonzero Bloch components");
  return f;
}

}  // namespace entbroadcast::cloners
