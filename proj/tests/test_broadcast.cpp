#include "entbroadcast/broadcast.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace entbroadcast;
using broadcast::SweepSpec;
using cloners::Kind;
using measures::DcFormula;
using states::BlochState;

namespace {

double lo_of(const broadcast::RangeResult& r) { return r.intervals.front().lo; }
double hi_of(const broadcast::RangeResult& r) { return r.intervals.back().hi; }

// valid Bell-diagonal triple, uniform over the state tetrahedron
states::BellDiagonalParams random_bell_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    states::BellDiagonalParams params{u(rng), u(rng), u(rng)};
    bool ok = true;
    for (double l : states::bell_diagonal_eigenvalues(params)) ok = ok && l >= 0.0;
    if (ok) return params;
  }
}

}  // namespace

TEST_CASE("broadcast report on reference points") {
  const auto inside = broadcast::broadcast_report(states::werner_like({0.9, 0.5}), Kind::local, 2);
  CHECK(inside.broadcast_ok);
  CHECK(inside.desired_pair_inseparable);
  CHECK(inside.side_pair_separable);
  CHECK(inside.sum_tf == doctest::Approx(inside.dtf + inside.fb).epsilon(1e-12));
  CHECK(inside.sum_dc == doctest::Approx(inside.ddc + inside.fb).epsilon(1e-12));

  // below the nonlocal threshold 5/9
  const auto below =
      broadcast::broadcast_report(states::werner_like({0.5, 0.5}), Kind::nonlocal, 2);
  CHECK_FALSE(below.broadcast_ok);
  CHECK_FALSE(below.desired_pair_inseparable);

  const auto mixed = broadcast::broadcast_report(BlochState{}, Kind::local, 2);
  CHECK_FALSE(mixed.broadcast_ok);

  CHECK_THROWS_AS(broadcast::broadcast_report(BlochState{}, Kind::local, 3), std::domain_error);
}

TEST_CASE("werner local range in p matches the published two-decimal values") {
  CHECK(lo_of(broadcast::werner_local_range(0.2)) == doctest::Approx(0.87).epsilon(0.01));
  CHECK(lo_of(broadcast::werner_local_range(0.4)) == doctest::Approx(0.76).epsilon(0.01));
  CHECK(lo_of(broadcast::werner_local_range(0.5)) == doctest::Approx(0.75).epsilon(1e-12));
  const auto iv = broadcast::werner_local_range(0.5).intervals.front();
  CHECK(iv.lo_open);
  CHECK_FALSE(iv.hi_open);
  CHECK(iv.hi == 1.0);
  CHECK(broadcast::werner_local_range(0.0).empty());
  CHECK(broadcast::werner_local_range(1.0).empty());
}

TEST_CASE("werner local range in alpha2") {
  const auto r = broadcast::werner_local_range_p(0.8);
  CHECK(lo_of(r) == doctest::Approx(0.29).epsilon(0.02));
  CHECK(hi_of(r) == doctest::Approx(0.71).epsilon(0.02));
  CHECK(broadcast::werner_local_range_p(0.75).empty());
  CHECK(broadcast::werner_local_range_p(0.5).empty());
}

TEST_CASE("werner nonlocal range in p") {
  CHECK(lo_of(broadcast::werner_nonlocal_range(0.5)) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(lo_of(broadcast::werner_nonlocal_range(0.2)) == doctest::Approx(0.64).epsilon(0.01));
  CHECK(broadcast::werner_nonlocal_range(0.0).empty());
}

TEST_CASE("werner nonlocal range in alpha2") {
  const auto r = broadcast::werner_nonlocal_range_p(0.75);
  CHECK(lo_of(r) == doctest::Approx(0.10).epsilon(0.05));
  CHECK(hi_of(r) == doctest::Approx(0.90).epsilon(0.05));
  CHECK(broadcast::werner_nonlocal_range_p(5.0 / 9.0).empty());  // the window closes here
  CHECK_FALSE(broadcast::werner_nonlocal_range_p(5.0 / 9.0 + 1e-3).empty());
}

TEST_CASE("closed-form ranges agree with the numeric sweep to a grid step") {
  SweepSpec spec;
  spec.family = broadcast::Family::werner;
  spec.grid = 1000;

  for (Kind k : {Kind::local, Kind::nonlocal}) {
    spec.cloner = k;
    spec.swept = "p";
    spec.alpha2 = 0.35;
    auto row = broadcast::sweep(spec);
    REQUIRE(row.analytic.has_value());
    REQUIRE_FALSE(row.numeric.empty());
    CHECK(std::abs(lo_of(row.numeric) - lo_of(*row.analytic)) < 1e-3);
    CHECK(hi_of(row.numeric) == doctest::Approx(hi_of(*row.analytic)).epsilon(1e-6));

    spec.swept = "alpha2";
    spec.p = 0.9;
    row = broadcast::sweep(spec);
    REQUIRE(row.analytic.has_value());
    REQUIRE_FALSE(row.numeric.empty());
    CHECK(std::abs(lo_of(row.numeric) - lo_of(*row.analytic)) < 1e-3);
    CHECK(std::abs(hi_of(row.numeric) - hi_of(*row.analytic)) < 1e-3);
  }
}

TEST_CASE("bell closed-form predicates on reference points") {
  CHECK(broadcast::bell_local_inseparable(-7.0 / 8, -7.0 / 8, -7.0 / 8));
  CHECK_FALSE(broadcast::bell_local_inseparable(0, 0, 0));
  CHECK(broadcast::bell_nonlocal_inseparable(1, -1, 1));
  CHECK_FALSE(broadcast::bell_nonlocal_inseparable(0, 0, 0));
  CHECK_THROWS_AS(broadcast::bell_local_inseparable(1, 1, 1), qmat::invalid_state_error);
}

TEST_CASE("bell predicates equal the numeric PPT verdict away from boundaries") {
  std::mt19937_64 rng(51);
  int checked = 0;
  for (int it = 0; it < 1000; ++it) {
    const auto params = random_bell_params(rng);
    const BlochState s = states::bell_diagonal(params);
    for (Kind k : {Kind::local, Kind::nonlocal}) {
      const auto rep = broadcast::broadcast_report(s, k, 2);
      if (std::abs(rep.min_pt_desired) <= 1e-6) continue;  // boundary band
      const bool closed_form = k == Kind::local
                                   ? broadcast::bell_local_inseparable(params.c1, params.c2, params.c3)
                                   : broadcast::bell_nonlocal_inseparable(params.c1, params.c2, params.c3);
      CHECK(closed_form == rep.desired_pair_inseparable);
      ++checked;
    }
  }
  CHECK(checked > 1500);
}

TEST_CASE("sweep reproduces appendix range cells") {
  SweepSpec spec;
  spec.family = broadcast::Family::werner;
  spec.cloner = Kind::nonlocal;
  spec.swept = "p";
  spec.grid = 1000;

  spec.alpha2 = 0.2;
  spec.n_copies = 5;
  CHECK(broadcast::sweep(spec).numeric.empty());  // published NA

  spec.alpha2 = 0.5;
  spec.n_copies = 3;
  const auto row = broadcast::sweep(spec);
  REQUIRE_FALSE(row.numeric.empty());
  CHECK(lo_of(row.numeric) == doctest::Approx(0.71).epsilon(0.01));
  CHECK(hi_of(row.numeric) == 1.0);

  SweepSpec bell;
  bell.family = broadcast::Family::belldiag;
  bell.cloner = Kind::nonlocal;
  bell.swept = "c1";
  bell.c2 = -0.56;
  bell.c3 = 0.56;
  bell.grid = 1000;
  const auto brow = broadcast::sweep(bell);
  REQUIRE_FALSE(brow.numeric.empty());
  CHECK(lo_of(brow.numeric) == doctest::Approx(0.55).epsilon(0.01));
  CHECK(hi_of(brow.numeric) == 1.0);
}

TEST_CASE("nonlocal broadcastable p-interval shrinks as copies increase") {
  SweepSpec spec;
  spec.family = broadcast::Family::werner;
  spec.cloner = Kind::nonlocal;
  spec.swept = "p";
  spec.alpha2 = 0.5;
  spec.grid = 500;
  double prev_lo = 0.0;
  for (int n = 2; n <= 5; ++n) {
    spec.n_copies = n;
    const auto row = broadcast::sweep(spec);
    REQUIRE_FALSE(row.numeric.empty());
    CHECK(lo_of(row.numeric) > prev_lo);
    CHECK(hi_of(row.numeric) == 1.0);
    prev_lo = lo_of(row.numeric);
  }
}

TEST_CASE("broadcastable states have entangled inputs") {
  std::mt19937_64 rng(52);
  int broadcastable = 0;
  for (int it = 0; it < 400; ++it) {
    const BlochState s = states::sample_random_state(rng);
    for (Kind k : {Kind::local, Kind::nonlocal}) {
      const auto rep = broadcast::broadcast_report(s, k, 2);
      if (!rep.broadcast_ok) continue;
      ++broadcastable;
      const auto input_verdict = measures::ppt_verdict(states::bloch_to_density(s));
      CHECK(input_verdict.inseparable);
    }
  }
  CHECK(broadcastable > 0);
}

TEST_CASE("nonlocal pairs teleport at least as well as local pairs") {
  // T-shrink 3/5 beats 4/9, and TF is monotone in the singular values
  std::mt19937_64 rng(53);
  for (int it = 0; it < 100; ++it) {
    const BlochState s = states::sample_random_state(rng);
    const double tf_local =
        measures::teleportation_fidelity(cloners::local_clone(s).desired_pair);
    const double tf_nonlocal =
        measures::teleportation_fidelity(cloners::nonlocal_clone(s, 2).desired_pair);
    CHECK(tf_nonlocal >= tf_local - 1e-12);
  }
}

TEST_CASE("scatter datasets respect the bounds and are reproducible") {
  const auto rows = broadcast::scatter_dataset(300, 42, Kind::local);
  CHECK(rows.size() == 300);
  for (const auto& r : rows) {
    CHECK(r.sum_tf <= 2.0);
    CHECK(r.sum_dc <= 3.0);
    CHECK(r.purity >= 0.25);
    CHECK(r.purity <= 1.0);
  }
  const auto again = broadcast::scatter_dataset(300, 42, Kind::local);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].purity == again[i].purity);
    CHECK(rows[i].sum_tf == again[i].sum_tf);
    CHECK(rows[i].sum_dc == again[i].sum_dc);
  }
  const auto other = broadcast::scatter_dataset(300, 43, Kind::local);
  CHECK(rows[0].purity != other[0].purity);
}

TEST_CASE("surface dataset covers the grid deterministically") {
  const auto rows = broadcast::surface_dataset(21, Kind::nonlocal);
  CHECK(rows.size() == 21 * 21);
  CHECK(rows.front().alpha2 == 0.0);
  CHECK(rows.back().alpha2 == 1.0);
  CHECK(rows.back().p == 1.0);
  // the Bell corner broadcasts, the maximally mixed corner does not
  bool bell_ok = false, mixed_ok = true;
  for (const auto& r : rows) {
    if (r.alpha2 == 0.5 && r.p == 1.0) bell_ok = r.broadcast_ok;
    if (r.p == 0.0) mixed_ok = mixed_ok && !r.broadcast_ok;
  }
  CHECK(bell_ok);
  CHECK(mixed_ok);
}

TEST_CASE("sum statistics track the published convention calibration") {
  // Werner local, alpha2 = 0.5: the published TF cell 1.099 is the maximum of
  // dTF + FB^2 over the broadcastable p; the plain-FB maximum is higher.
  SweepSpec spec;
  spec.family = broadcast::Family::werner;
  spec.cloner = Kind::local;
  spec.swept = "p";
  spec.alpha2 = 0.5;
  spec.grid = 1000;
  const auto row = broadcast::sweep(spec);
  REQUIRE(row.sums.tf_fb2.defined);
  CHECK(row.sums.tf_fb2.max_v == doctest::Approx(1.099).epsilon(0.002));
  // the DC maximum sits at an interior p just below 1, not at the endpoint
  CHECK(row.sums.dc_unclamped_fb2.max_v == doctest::Approx(2.244).epsilon(0.002));
  CHECK(row.sums.tf_fb.max_v > row.sums.tf_fb2.max_v);
  CHECK(row.sums.tf_fb.min_v <= row.sums.tf_fb.max_v);
}
