#pragma once

#include "entbroadcast/cloners.hpp"
#include "entbroadcast/measures.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace entbroadcast::broadcast {

using measures::DcFormula;
using states::BlochState;

// ---------------------------------------------------------------------------
// Single-state verdict
// ---------------------------------------------------------------------------

struct BroadcastReport {
  BlochState input;
  cloners::Kind cloner;
  int n_copies;
  bool desired_pair_inseparable;
  bool side_pair_separable;  // both cross-qubit side pairs
  bool broadcast_ok;         // desired inseparable and side pairs separable
  double fb;                 // Uhlmann fidelity between input and desired pair
  double dtf;
  double ddc;
  double sum_tf;  // dtf + fb
  double sum_dc;  // ddc + fb
  double purity;
  DcFormula dc_formula;
  double min_pt_desired;  // diagnostics
  double min_pt_side;
};

/// Clones, tests both output pair classes with the PPT criterion and collects
/// the complementarity quantities. Local cloning requires n_copies == 2.
BroadcastReport broadcast_report(const BlochState& s, cloners::Kind cloner, int n_copies,
                                 DcFormula f = DcFormula::unclamped);

// ---------------------------------------------------------------------------
// Closed-form broadcasting ranges (two copies)
// ---------------------------------------------------------------------------

struct Interval {
  double lo, hi;
  bool lo_open, hi_open;
};

struct RangeResult {
  std::string variable;
  std::vector<Interval> intervals;

  bool empty() const { return intervals.empty(); }
  std::string to_string() const;  // e.g. "(0.75, 1]" or "NA"
};

/// Broadcastable p for a Werner-like state under local cloning: the solution
/// of 3/4 < p <= 1 with alpha2 strictly between the quadratic boundaries N-+.
RangeResult werner_local_range(double alpha2);

/// Broadcastable alpha2 at fixed p (the interval (N-, N+)).
RangeResult werner_local_range_p(double p);

/// Broadcastable p for two nonlocal copies: 5/9 < p <= 1 with alpha2 inside
/// the 1/2 +- H window.
RangeResult werner_nonlocal_range(double alpha2);

/// Broadcastable alpha2 at fixed p: (1/2 - H, 1/2 + H).
RangeResult werner_nonlocal_range_p(double p);

/// Closed-form inseparability of the local-cloning broadcast pair of a
/// Bell-diagonal state. Throws on parameters outside the state class.
bool bell_local_inseparable(double c1, double c2, double c3);

/// Same for two nonlocal copies.
bool bell_nonlocal_inseparable(double c1, double c2, double c3);

// ---------------------------------------------------------------------------
// Sweep engine
// ---------------------------------------------------------------------------

enum class Family { werner, belldiag };

const char* to_string(Family f);

struct SweepSpec {
  Family family = Family::werner;
  cloners::Kind cloner = cloners::Kind::local;
  int n_copies = 2;
  DcFormula dc = DcFormula::unclamped;
  std::string swept;  // werner: "p" | "alpha2"; belldiag: "c1" | "c2" | "c3"
  double p = 0.0;
  double alpha2 = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  int grid = 1000;  // at least 100 points
};

/// Extrema of a complementarity sum over the broadcastable set, plus its
/// values just inside the lower/upper range boundaries.
struct SumStats {
  bool defined = false;
  double max_v = 0.0, min_v = 0.0;
  double at_lo = 0.0, at_hi = 0.0;
};

/// The TF and DC sums under every convention combination the published
/// figures could have used: plain fidelity vs squared fidelity, and both
/// dense-coding variants.
struct SweepSums {
  SumStats tf_fb, tf_fb2;
  SumStats dc_unclamped_fb, dc_unclamped_fb2;
  SumStats dc_clamped_fb, dc_clamped_fb2;
};

struct SweepRow {
  SweepSpec spec;
  RangeResult numeric;                  // from the cloner + PPT machinery
  std::optional<RangeResult> analytic;  // closed forms; two-copy cases only
  SweepSums sums;
};

/// Grids the swept variable over its domain, detects the broadcastable
/// subintervals (endpoints refined to 1e-6 by bisection) and accumulates the
/// sum statistics over the broadcastable set.
SweepRow sweep(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Datasets for the figures
// ---------------------------------------------------------------------------

struct ScatterRow {
  double purity;
  double sum_tf;
  double sum_dc;
};

/// One row per sampled state. Enforces the global bounds sum_tf <= 2 and
/// sum_dc <= 3; a violation throws std::logic_error.
std::vector<ScatterRow> scatter_dataset(int n_samples, std::uint64_t seed, cloners::Kind cloner,
                                        states::Sampler sampler = states::Sampler::hilbert_schmidt,
                                        DcFormula f = DcFormula::unclamped);

struct SurfaceRow {
  double alpha2;
  double p;
  double sum_tf;
  double sum_dc;
  bool broadcast_ok;
};

/// grid x grid Werner-like sums over (alpha2, p) in [0,1]^2.
std::vector<SurfaceRow> surface_dataset(int grid, cloners::Kind cloner,
                                        DcFormula f = DcFormula::unclamped);

// ---------------------------------------------------------------------------
// Parallel helpers (sweep rows are independent work items)
// ---------------------------------------------------------------------------

/// Worker count: ENTBROADCAST_THREADS if set, hardware concurrency otherwise.
int thread_cap();

/// Runs fn(0..n_jobs-1) on up to thread_cap() threads. Callers own output
/// slots per index, so results are deterministic regardless of scheduling.
void run_parallel(std::size_t n_jobs, const std::function<void(std::size_t)>& fn);

}  // namespace entbroadcast::broadcast
