#include "entbroadcast/broadcast.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace entbroadcast::broadcast {

using measures::ppt_verdict;
using qmat::CMat;

namespace {

cloners::CloneOutput run_cloner(const BlochState& s, cloners::Kind cloner, int n_copies) {
  if (cloner == cloners::Kind::local) {
    if (n_copies != 2) throw std::domain_error("local broadcasting supports exactly 2 copies");
    return cloners::local_clone(s);
  }
  return cloners::nonlocal_clone(s, n_copies);
}

// Everything the sweep needs from one state, both DC variants at once.
struct PointReport {
  bool ok = false;
  bool desired_inseparable = false;
  bool side_separable = false;
  double fb = 0.0, dtf = 0.0;
  double ddc_unclamped = 0.0, ddc_clamped = 0.0;
  double purity = 0.0;
  double min_pt_desired = 0.0, min_pt_side = 0.0;
};

PointReport evaluate_point(const BlochState& s, cloners::Kind cloner, int n_copies) {
  const auto out = run_cloner(s, cloner, n_copies);
  const CMat rho_in = states::bloch_to_density(s);
  const CMat rho_des = states::bloch_to_density(out.desired_pair);

  PointReport r;
  const auto vd = ppt_verdict(rho_des);
  const auto vs_a = ppt_verdict(states::bloch_to_density(out.side_pair));
  const auto vs_b = ppt_verdict(states::bloch_to_density(out.side_pair_b));
  r.desired_inseparable = vd.inseparable;
  r.side_separable = !vs_a.inseparable && !vs_b.inseparable;
  r.ok = r.desired_inseparable && r.side_separable;
  r.min_pt_desired = vd.min_pt_eigenvalue;
  r.min_pt_side = std::min(vs_a.min_pt_eigenvalue, vs_b.min_pt_eigenvalue);

  r.fb = measures::uhlmann_fidelity(rho_in, rho_des);
  r.dtf = measures::delta_tf(s, out.desired_pair);
  const double dc_in_u = measures::dense_coding_capacity(rho_in, DcFormula::unclamped);
  const double dc_out_u = measures::dense_coding_capacity(rho_des, DcFormula::unclamped);
  r.ddc_unclamped = dc_in_u - dc_out_u;
  r.ddc_clamped = std::max(1.0, dc_in_u) - std::max(1.0, dc_out_u);
  r.purity = states::purity(s);
  return r;
}

}  // namespace

BroadcastReport broadcast_report(const BlochState& s, cloners::Kind cloner, int n_copies,
                                 DcFormula f) {
  const PointReport p = evaluate_point(s, cloner, n_copies);
  BroadcastReport rep;
  rep.input = s;
  rep.cloner = cloner;
  rep.n_copies = n_copies;
  rep.desired_pair_inseparable = p.desired_inseparable;
  rep.side_pair_separable = p.side_separable;
  rep.broadcast_ok = p.ok;
  rep.fb = p.fb;
  rep.dtf = p.dtf;
  rep.ddc = (f == DcFormula::unclamped) ? p.ddc_unclamped : p.ddc_clamped;
  rep.sum_tf = rep.dtf + rep.fb;
  rep.sum_dc = rep.ddc + rep.fb;
  rep.purity = p.purity;
  rep.dc_formula = f;
  rep.min_pt_desired = p.min_pt_desired;
  rep.min_pt_side = p.min_pt_side;
  return rep;
}

// ---------------------------------------------------------------------------
// Closed-form ranges
// ---------------------------------------------------------------------------

std::string RangeResult::to_string() const {
  if (intervals.empty()) return "NA";
  std::ostringstream os;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto& iv = intervals[k];
    if (k) os << " u ";
    os << (iv.lo_open ? '(' : '[');
    os.precision(6);
    os << iv.lo << ", " << iv.hi << (iv.hi_open ? ')' : ']');
  }
  return os.str();
}

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

RangeResult p_range_above(double p_lo) {
  RangeResult r;
  r.variable = "p";
  if (p_lo < 1.0) r.intervals.push_back({p_lo, 1.0, true, false});
  return r;
}

}  // namespace

RangeResult werner_local_range(double alpha2) {
  require_unit_interval(alpha2, "alpha2");
  // N- < alpha2 < N+ rearranged as a quadratic in 1/p and solved for p.
  const double h = (alpha2 - 0.5) * (alpha2 - 0.5);
  return p_range_above(std::max(0.75, 9.0 / (4.0 + 8.0 * std::sqrt(1.0 - 4.0 * h))));
}

RangeResult werner_local_range_p(double p) {
  require_unit_interval(p, "p");
  RangeResult r;
  r.variable = "alpha2";
  if (p <= 0.75) return r;
  const double rad = 48.0 - 81.0 / (p * p) + 72.0 / p;
  if (rad <= 0.0) return r;
  const double n_minus = (8.0 - std::sqrt(rad)) / 16.0;
  const double n_plus = (8.0 + std::sqrt(rad)) / 16.0;
  r.intervals.push_back({n_minus, n_plus, true, true});
  return r;
}

RangeResult werner_nonlocal_range(double alpha2) {
  require_unit_interval(alpha2, "alpha2");
  // alpha2 inside 1/2 +- H(p) solved for p; rationalized so the quadratic
  // leading coefficient may vanish.
  const double h = (alpha2 - 0.5) * (alpha2 - 0.5);
  return p_range_above(std::max(5.0 / 9.0, 5.0 / (3.0 + 6.0 * std::sqrt(1.0 - 4.0 * h))));
}

RangeResult werner_nonlocal_range_p(double p) {
  require_unit_interval(p, "p");
  RangeResult r;
  r.variable = "alpha2";
  if (p <= 5.0 / 9.0) return r;
  const double num = 27.0 * p * p + 30.0 * p - 25.0;
  if (num <= 0.0) return r;
  const double h = std::sqrt(num) / (12.0 * p);
  r.intervals.push_back({0.5 - h, 0.5 + h, true, true});
  return r;
}

namespace {

void require_bell_params(double c1, double c2, double c3) {
  states::BellDiagonalParams params{c1, c2, c3};
  for (double c : {c1, c2, c3})
    if (!(c >= -1.0 && c <= 1.0))
      throw std::domain_error("bell coefficients must lie in [-1, 1]");
  for (double l : states::bell_diagonal_eigenvalues(params))
    if (l < -1e-12)
      throw qmat::invalid_state_error("bell coefficients give a negative eigenvalue");
}

}  // namespace

bool bell_local_inseparable(double c1, double c2, double c3) {
  require_bell_params(c1, c2, c3);
  const bool low_c1 = (c1 >= -1.0 && c1 < -0.25) &&
                      (c1 + c2 + c3 < -2.25 || (c2 > c1 - c3 + 2.25 && c2 <= 1.0));
  const bool high_c1 = (c1 > 0.25 && c1 <= 1.0) &&
                       ((c2 > 2.25 - c1 + c3 && c2 <= 1.0) || (c2 >= -1.0 && c2 < c1 + c3 - 2.25));
  return low_c1 || high_c1;
}

bool bell_nonlocal_inseparable(double c1, double c2, double c3) {
  require_bell_params(c1, c2, c3);
  const double gamma = c1 + c2 + c3;
  const double quartic = (6.0 * c1 - 3.0 * gamma + 5.0) * (3.0 * gamma - 6.0 * c3 - 5.0) *
                         (3.0 * gamma - 6.0 * c2 - 5.0) * (3.0 * gamma + 5.0);
  const double cubic =
      (3.0 * c3 + 5.0) *
      ((5.0 - 3.0 * c3) * (5.0 - 3.0 * c3) - 9.0 * (c1 - c2) * (c1 - c2));
  return quartic < 0.0 || cubic < 0.0;
}

// ---------------------------------------------------------------------------
// Sweep engine
// ---------------------------------------------------------------------------

const char* to_string(Family f) { return f == Family::werner ? "werner" : "belldiag"; }

namespace {

struct SweptDomain {
  double lo, hi;
};

SweptDomain domain_of(const SweepSpec& spec) {
  if (spec.swept == "p" || spec.swept == "alpha2") return {0.0, 1.0};
  if (spec.swept == "c1" || spec.swept == "c2" || spec.swept == "c3") return {-1.0, 1.0};
  throw std::domain_error("sweep: unknown swept variable '" + spec.swept + "'");
}

// nullopt when the parameters do not give a valid state
std::optional<BlochState> make_state(const SweepSpec& spec, double v) {
  if (spec.family == Family::werner) {
    if (spec.swept != "p" && spec.swept != "alpha2")
      throw std::domain_error("sweep: werner family sweeps p or alpha2");
    const double p = spec.swept == "p" ? v : spec.p;
    const double a2 = spec.swept == "alpha2" ? v : spec.alpha2;
    return states::werner_like({p, a2});
  }
  double c1 = spec.c1, c2 = spec.c2, c3 = spec.c3;
  if (spec.swept == "c1")
    c1 = v;
  else if (spec.swept == "c2")
    c2 = v;
  else if (spec.swept == "c3")
    c3 = v;
  else
    throw std::domain_error("sweep: belldiag family sweeps c1, c2 or c3");
  const states::BellDiagonalParams params{c1, c2, c3};
  for (double l : states::bell_diagonal_eigenvalues(params))
    if (l < 0.0) return std::nullopt;
  return states::bell_diagonal(params);
}

constexpr double refine_tol = 1e-6;

// Detects where an indicator switches between k0 (false/invalid) and k1
// (true); returns the transition estimate and a point on the true side.
std::pair<double, double> refine_boundary(const std::function<bool(double)>& ok, double v_false,
                                          double v_true) {
  while (std::abs(v_true - v_false) > refine_tol) {
    const double mid = 0.5 * (v_false + v_true);
    (ok(mid) ? v_true : v_false) = mid;
  }
  return {0.5 * (v_false + v_true), v_true};
}

RangeResult detect_intervals(const std::function<bool(double)>& ok, const SweptDomain& dom,
                             int grid, const std::string& variable,
                             std::vector<double>* inside_points = nullptr) {
  if (grid < 100) throw std::domain_error("sweep: grid must have at least 100 points");
  RangeResult result;
  result.variable = variable;

  std::vector<double> vs(grid);
  std::vector<char> flags(grid);
  for (int k = 0; k < grid; ++k) {
    vs[k] = dom.lo + (dom.hi - dom.lo) * k / (grid - 1);
    flags[k] = ok(vs[k]) ? 1 : 0;
  }

  int k = 0;
  while (k < grid) {
    if (!flags[k]) {
      ++k;
      continue;
    }
    const int run_start = k;
    while (k + 1 < grid && flags[k + 1]) ++k;
    const int run_end = k;

    Interval iv{};
    if (run_start == 0) {
      iv.lo = vs[0];
      iv.lo_open = false;
      if (inside_points) inside_points->push_back(vs[0]);
    } else {
      auto [bound, inside] = refine_boundary(ok, vs[run_start - 1], vs[run_start]);
      iv.lo = bound;
      iv.lo_open = !ok(bound);
      if (inside_points) inside_points->push_back(inside);
    }
    if (run_end == grid - 1) {
      iv.hi = vs[grid - 1];
      iv.hi_open = false;
      if (inside_points) inside_points->push_back(vs[grid - 1]);
    } else {
      auto [bound, inside] = refine_boundary(ok, vs[run_end + 1], vs[run_end]);
      iv.hi = bound;
      iv.hi_open = !ok(bound);
      if (inside_points) inside_points->push_back(inside);
    }
    result.intervals.push_back(iv);
    ++k;
  }
  return result;
}

std::optional<RangeResult> analytic_range(const SweepSpec& spec) {
  if (spec.n_copies != 2) return std::nullopt;  // closed forms exist for two copies only
  if (spec.family == Family::werner) {
    if (spec.cloner == cloners::Kind::local)
      return spec.swept == "p" ? werner_local_range(spec.alpha2) : werner_local_range_p(spec.p);
    return spec.swept == "p" ? werner_nonlocal_range(spec.alpha2)
                             : werner_nonlocal_range_p(spec.p);
  }
  const auto predicate = [&](double v) {
    const auto s = make_state(spec, v);
    if (!s) return false;
    const double c1 = spec.swept == "c1" ? v : spec.c1;
    const double c2 = spec.swept == "c2" ? v : spec.c2;
    const double c3 = spec.swept == "c3" ? v : spec.c3;
    return spec.cloner == cloners::Kind::local ? bell_local_inseparable(c1, c2, c3)
                                               : bell_nonlocal_inseparable(c1, c2, c3);
  };
  return detect_intervals(predicate, domain_of(spec), spec.grid, spec.swept);
}

struct SumAccumulator {
  SumStats stats{};

  void add(double value) {
    if (!stats.defined) {
      stats.defined = true;
      stats.max_v = stats.min_v = value;
    } else {
      stats.max_v = std::max(stats.max_v, value);
      stats.min_v = std::min(stats.min_v, value);
    }
  }
};

}  // namespace

SweepRow sweep(const SweepSpec& spec) {
  const SweptDomain dom = domain_of(spec);

  const auto ok_at = [&](double v) {
    const auto s = make_state(spec, v);
    if (!s) return false;
    return evaluate_point(*s, spec.cloner, spec.n_copies).ok;
  };

  SweepRow row;
  row.spec = spec;
  std::vector<double> boundary_inside;
  row.numeric = detect_intervals(ok_at, dom, spec.grid, spec.swept, &boundary_inside);
  row.analytic = analytic_range(spec);

  // Sum statistics over the broadcastable set: all broadcastable grid points
  // plus the refined points hugging each interval boundary. The boundary
  // values take the sums at the innermost refined points, approximating the
  // open-endpoint limits to the refinement tolerance.
  SumAccumulator tf_fb, tf_fb2, dc_u_fb, dc_u_fb2, dc_c_fb, dc_c_fb2;

  std::vector<double> eval_points;
  for (int k = 0; k < spec.grid; ++k)
    eval_points.push_back(dom.lo + (dom.hi - dom.lo) * k / (spec.grid - 1));
  eval_points.insert(eval_points.end(), boundary_inside.begin(), boundary_inside.end());

  const auto sums_at = [](const PointReport& p) {
    const double fb2 = p.fb * p.fb;
    return std::array<double, 6>{p.dtf + p.fb,          p.dtf + fb2,
                                 p.ddc_unclamped + p.fb, p.ddc_unclamped + fb2,
                                 p.ddc_clamped + p.fb,   p.ddc_clamped + fb2};
  };

  for (double v : eval_points) {
    const auto s = make_state(spec, v);
    if (!s) continue;
    const PointReport p = evaluate_point(*s, spec.cloner, spec.n_copies);
    if (!p.ok) continue;
    const auto vals = sums_at(p);
    tf_fb.add(vals[0]);
    tf_fb2.add(vals[1]);
    dc_u_fb.add(vals[2]);
    dc_u_fb2.add(vals[3]);
    dc_c_fb.add(vals[4]);
    dc_c_fb2.add(vals[5]);
  }

  row.sums.tf_fb = tf_fb.stats;
  row.sums.tf_fb2 = tf_fb2.stats;
  row.sums.dc_unclamped_fb = dc_u_fb.stats;
  row.sums.dc_unclamped_fb2 = dc_u_fb2.stats;
  row.sums.dc_clamped_fb = dc_c_fb.stats;
  row.sums.dc_clamped_fb2 = dc_c_fb2.stats;

  if (!boundary_inside.empty()) {
    const auto fill_boundary = [&](double v, bool is_lo) {
      const auto s = make_state(spec, v);
      if (!s) return;
      const PointReport p = evaluate_point(*s, spec.cloner, spec.n_copies);
      const auto vals = sums_at(p);
      SumStats* slots[6] = {&row.sums.tf_fb,          &row.sums.tf_fb2,
                            &row.sums.dc_unclamped_fb, &row.sums.dc_unclamped_fb2,
                            &row.sums.dc_clamped_fb,   &row.sums.dc_clamped_fb2};
      for (int i = 0; i < 6; ++i) (is_lo ? slots[i]->at_lo : slots[i]->at_hi) = vals[i];
    };
    fill_boundary(boundary_inside.front(), true);
    fill_boundary(boundary_inside.back(), false);
  }
  return row;
}

// ---------------------------------------------------------------------------
// Figure datasets
// ---------------------------------------------------------------------------

std::vector<ScatterRow> scatter_dataset(int n_samples, std::uint64_t seed, cloners::Kind cloner,
                                        states::Sampler sampler, DcFormula f) {
  if (n_samples < 1) throw std::domain_error("scatter: need at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<ScatterRow> rows;
  rows.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const BlochState s = states::sample_random_state(rng, sampler);
    const BroadcastReport rep = broadcast_report(s, cloner, 2, f);
    if (rep.sum_tf > 2.0 || rep.sum_dc > 3.0)
      throw std::logic_error("scatter: complementarity bound violated");
    rows.push_back({rep.purity, rep.sum_tf, rep.sum_dc});
  }
  return rows;
}

std::vector<SurfaceRow> surface_dataset(int grid, cloners::Kind cloner, DcFormula f) {
  if (grid < 2) throw std::domain_error("surface: grid must be at least 2");
  std::vector<SurfaceRow> rows(static_cast<std::size_t>(grid) * grid);
  run_parallel(grid, [&](std::size_t ia) {
    const double a2 = static_cast<double>(ia) / (grid - 1);
    for (int ip = 0; ip < grid; ++ip) {
      const double p = static_cast<double>(ip) / (grid - 1);
      const BroadcastReport rep = broadcast_report(states::werner_like({p, a2}), cloner, 2, f);
      rows[ia * grid + ip] = {a2, p, rep.sum_tf, rep.sum_dc, rep.broadcast_ok};
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Parallel helpers
// ---------------------------------------------------------------------------

int thread_cap() {
  if (const char* env = std::getenv("ENTBROADCAST_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void run_parallel(std::size_t n_jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(thread_cap(), 1), std::max<std::size_t>(n_jobs, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n_jobs; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace entbroadcast::broadcast
