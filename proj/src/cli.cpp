#include "entbroadcast/cli.hpp"

#include "entbroadcast/reference_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace entbroadcast::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using broadcast::Family;
using broadcast::SweepRow;
using cloners::Kind;
using measures::DcFormula;
using reference::TableRow;
using states::BlochState;

namespace {

std::string fmt6(double v) {
  if (std::isnan(v)) return "NA";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return std::stod(fmt6(v));
}

// Rows of already formatted cells; one place decides CSV vs JSON.
struct Dataset {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;

  std::string to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "");
        const json& cell = row[i];
        if (cell.is_null())
          os << "NA";
        else if (cell.is_string())
          os << cell.get<std::string>();
        else if (cell.is_boolean())
          os << (cell.get<bool>() ? 1 : 0);
        else
          os << fmt6(cell.get<double>());
      }
      os << "\n";
    }
    return os.str();
  }

  std::string to_json() const {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[header[i]] = row[i];
      arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
  }

  std::string render(OutputFormat f) const {
    return f == OutputFormat::csv ? to_csv() : to_json();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

void emit_dataset(const Dataset& data, const std::string& out, OutputFormat format) {
  if (out.empty())
    std::cout << data.render(format);
  else
    write_text(out, data.render(format));
}

std::string plot_stem(const std::string& out) {
  fs::path p(out);
  p.replace_extension();
  return p.string();
}

void emit_scatter_plot(const std::string& out) {
  const fs::path csv(out);
  const std::string stem = plot_stem(out);
  std::ostringstream os;
  os << "# gnuplot script for " << csv.filename().string() << "\n"
     << "set datafile separator comma\n"
     << "set terminal pngcairo size 900,600\n"
     << "set key off\n"
     << "set xlabel 'Tr[rho^2]'\n"
     << "set ylabel 'dTF + FB'\n"
     << "set output '" << fs::path(stem).filename().string() << "_sum_tf.png'\n"
     << "plot '" << csv.filename().string() << "' every ::1 using 1:2 with points pt 7 ps 0.35\n"
     << "set ylabel 'dDC + FB'\n"
     << "set output '" << fs::path(stem).filename().string() << "_sum_dc.png'\n"
     << "plot '" << csv.filename().string() << "' every ::1 using 1:3 with points pt 7 ps 0.35\n";
  write_text(stem + ".gp", os.str());
}

void emit_surface_plot(const std::string& out, int grid) {
  const fs::path csv(out);
  const std::string stem = plot_stem(out);
  std::ostringstream os;
  os << "# gnuplot script for " << csv.filename().string() << "\n"
     << "set datafile separator comma\n"
     << "set terminal pngcairo size 900,700\n"
     << "set key off\n"
     << "set dgrid3d " << grid << "," << grid << "\n"
     << "set hidden3d\n"
     << "set xlabel 'alpha^2'\n"
     << "set ylabel 'p'\n"
     << "set zlabel 'dTF + FB'\n"
     << "set output '" << fs::path(stem).filename().string() << "_sum_tf.png'\n"
     << "splot '" << csv.filename().string() << "' every ::1 using 1:2:3 with lines\n"
     << "set zlabel 'dDC + FB'\n"
     << "set output '" << fs::path(stem).filename().string() << "_sum_dc.png'\n"
     << "splot '" << csv.filename().string() << "' every ::1 using 1:2:4 with lines\n";
  write_text(stem + ".gp", os.str());
}

// ---------------------------------------------------------------------------
// State construction and validation
// ---------------------------------------------------------------------------

void require_range(bool cond, const std::string& what) {
  if (!cond) throw std::domain_error(what);
}

BlochState state_from_config(const RunConfig& cfg) {
  if (cfg.random_family) return states::sample_random_state(cfg.seed, cfg.sampler);
  if (cfg.family == Family::werner) {
    require_range(cfg.p >= 0.0, "missing --p for the werner family");
    require_range(cfg.alpha2 >= 0.0, "missing --alpha2 for the werner family");
    return states::werner_like({cfg.p, cfg.alpha2});
  }
  require_range(cfg.c.size() == 3, "the belldiag family needs --c c1,c2,c3");
  return states::bell_diagonal({cfg.c[0], cfg.c[1], cfg.c[2]});
}

void validate_cloner(const RunConfig& cfg) {
  if (cfg.cloner == Kind::local)
    require_range(cfg.n_copies == 2, "local cloning supports exactly 2 copies");
  else
    require_range(cfg.n_copies >= 2 && cfg.n_copies <= 5,
                  "nonlocal cloning supports 2 to 5 copies");
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_state(const RunConfig& cfg) {
  const BlochState s = state_from_config(cfg);
  const auto rho = states::bloch_to_density(s);
  const auto verdict = measures::ppt_verdict(rho);
  const double tf = measures::teleportation_fidelity(s);

  std::cout << "x: (" << fmt6(s.x[0]) << ", " << fmt6(s.x[1]) << ", " << fmt6(s.x[2]) << ")\n";
  std::cout << "y: (" << fmt6(s.y[0]) << ", " << fmt6(s.y[1]) << ", " << fmt6(s.y[2]) << ")\n";
  for (int i = 0; i < 3; ++i) {
    std::cout << (i == 0 ? "T: [" : "    ");
    std::cout << "[" << fmt6(s.t(i, 0)) << ", " << fmt6(s.t(i, 1)) << ", " << fmt6(s.t(i, 2))
              << "]" << (i == 2 ? "]" : "") << "\n";
  }
  std::cout << "purity: " << fmt6(states::purity(s)) << "\n";
  std::cout << "min PT eigenvalue: " << fmt6(verdict.min_pt_eigenvalue)
            << "  inseparable: " << yesno(verdict.inseparable) << "\n";
  std::cout << "teleportation fidelity: " << fmt6(tf)
            << "  useful (>2/3): " << yesno(tf > measures::classical_tf_limit) << "\n";
  std::cout << "dense coding capacity (unclamped): "
            << fmt6(measures::dense_coding_capacity(rho, DcFormula::unclamped)) << "\n";
  std::cout << "dense coding capacity (clamped): "
            << fmt6(measures::dense_coding_capacity(rho, DcFormula::clamped)) << "\n";
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  validate_cloner(cfg);
  const BlochState s = state_from_config(cfg);
  const auto rep = broadcast::broadcast_report(s, cfg.cloner, cfg.n_copies, cfg.dc);
  std::cout << "cloner: " << cloners::to_string(rep.cloner) << " (" << rep.n_copies
            << " copies)\n";
  std::cout << "desired pair inseparable: " << yesno(rep.desired_pair_inseparable)
            << " (min PT eigenvalue " << fmt6(rep.min_pt_desired) << ")\n";
  std::cout << "side pairs separable: " << yesno(rep.side_pair_separable)
            << " (min PT eigenvalue " << fmt6(rep.min_pt_side) << ")\n";
  std::cout << "broadcast: " << yesno(rep.broadcast_ok) << "\n";
  std::cout << "FB: " << fmt6(rep.fb) << "\n";
  std::cout << "dTF: " << fmt6(rep.dtf) << "\n";
  std::cout << "dDC (" << measures::to_string(rep.dc_formula) << "): " << fmt6(rep.ddc) << "\n";
  std::cout << "dTF + FB: " << fmt6(rep.sum_tf) << "\n";
  std::cout << "dDC + FB: " << fmt6(rep.sum_dc) << "\n";
  std::cout << "purity: " << fmt6(rep.purity) << "\n";
  return 0;
}

broadcast::SweepSpec spec_from_config(const RunConfig& cfg) {
  broadcast::SweepSpec spec;
  spec.family = cfg.family;
  spec.cloner = cfg.cloner;
  spec.n_copies = cfg.n_copies;
  spec.dc = cfg.dc;
  spec.grid = cfg.grid;
  if (cfg.family == Family::werner) {
    const bool has_p = cfg.p >= 0.0, has_a = cfg.alpha2 >= 0.0;
    if (!cfg.swept.empty())
      spec.swept = cfg.swept;
    else if (has_p && !has_a)
      spec.swept = "alpha2";
    else if (has_a && !has_p)
      spec.swept = "p";
    else
      throw std::domain_error("range: fix exactly one of --p / --alpha2 (or give --sweep)");
    spec.p = has_p ? cfg.p : 0.0;
    spec.alpha2 = has_a ? cfg.alpha2 : 0.0;
    if (spec.swept == "p")
      require_range(has_a, "range: sweeping p needs a fixed --alpha2");
    else
      require_range(has_p, "range: sweeping alpha2 needs a fixed --p");
  } else {
    require_range(cfg.c.size() == 3, "the belldiag family needs --c c1,c2,c3");
    require_range(!cfg.swept.empty(), "range: belldiag needs --sweep c1|c2|c3");
    spec.swept = cfg.swept;
    spec.c1 = cfg.c[0];
    spec.c2 = cfg.c[1];
    spec.c3 = cfg.c[2];
  }
  return spec;
}

Dataset range_dataset(const SweepRow& row) {
  Dataset d;
  d.header = {"family", "cloner", "n_copies", "swept", "range_lo", "range_hi",
              "analytic_lo", "analytic_hi", "intervals", "sum_tf_max", "sum_dc_max",
              "dc_variant"};
  const auto& num = row.numeric;
  json lo = nullptr, hi = nullptr, alo = nullptr, ahi = nullptr;
  if (!num.empty()) {
    lo = json_number(num.intervals.front().lo);
    hi = json_number(num.intervals.back().hi);
  }
  if (row.analytic && !row.analytic->empty()) {
    alo = json_number(row.analytic->intervals.front().lo);
    ahi = json_number(row.analytic->intervals.back().hi);
  }
  const auto& dc = row.spec.dc == DcFormula::unclamped ? row.sums.dc_unclamped_fb
                                                       : row.sums.dc_clamped_fb;
  d.rows.push_back({broadcast::to_string(row.spec.family), cloners::to_string(row.spec.cloner),
                    static_cast<double>(row.spec.n_copies), row.spec.swept, lo, hi, alo, ahi,
                    static_cast<double>(num.intervals.size()),
                    row.sums.tf_fb.defined ? json_number(row.sums.tf_fb.max_v) : json(nullptr),
                    dc.defined ? json_number(dc.max_v) : json(nullptr),
                    measures::to_string(row.spec.dc)});
  return d;
}

int cmd_range(const RunConfig& cfg) {
  validate_cloner(cfg);
  const auto spec = spec_from_config(cfg);
  const SweepRow row = broadcast::sweep(spec);
  std::cout << "numeric:  " << row.numeric.to_string() << "\n";
  if (row.analytic)
    std::cout << "analytic: " << row.analytic->to_string() << "\n";
  else
    std::cout << "analytic: (no closed form for this case)\n";
  if (!cfg.out.empty()) emit_dataset(range_dataset(row), cfg.out, cfg.format);
  return 0;
}

int cmd_scatter(const RunConfig& cfg) {
  validate_cloner(cfg);
  require_range(cfg.samples >= 1, "scatter: --samples must be at least 1");
  const auto rows =
      broadcast::scatter_dataset(cfg.samples, cfg.seed, cfg.cloner, cfg.sampler, cfg.dc);
  Dataset d;
  d.header = {"purity", "sum_tf", "sum_dc"};
  for (const auto& r : rows)
    d.rows.push_back({json_number(r.purity), json_number(r.sum_tf), json_number(r.sum_dc)});
  emit_dataset(d, cfg.out, cfg.format);
  if (cfg.emit_plot) {
    require_range(!cfg.out.empty(), "scatter: --emit-plot needs --out");
    emit_scatter_plot(cfg.out);
  }
  return 0;
}

int cmd_surface(const RunConfig& cfg) {
  validate_cloner(cfg);
  require_range(cfg.grid >= 2, "surface: --grid must be at least 2");
  const auto rows = broadcast::surface_dataset(cfg.grid, cfg.cloner, cfg.dc);
  Dataset d;
  d.header = {"alpha2", "p", "sum_tf", "sum_dc", "broadcast_ok"};
  for (const auto& r : rows)
    d.rows.push_back({json_number(r.alpha2), json_number(r.p), json_number(r.sum_tf),
                      json_number(r.sum_dc), r.broadcast_ok});
  emit_dataset(d, cfg.out, cfg.format);
  if (cfg.emit_plot) {
    require_range(!cfg.out.empty(), "surface: --emit-plot needs --out");
    emit_surface_plot(cfg.out, cfg.grid);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// tables: regeneration, regression report, convention calibration
// ---------------------------------------------------------------------------

struct SumCandidates {
  // [interpretation][fb variant]; interpretations: max, min, at_lo, at_hi
  double tf[4][2];
  double dc[4][2][2];  // x [dc variant]
  bool defined;
};

SumCandidates candidates_of(const broadcast::SweepSums& sums) {
  SumCandidates c{};
  c.defined = sums.tf_fb.defined;
  const auto fill = [](const broadcast::SumStats& s, double out[4]) {
    out[0] = s.max_v;
    out[1] = s.min_v;
    out[2] = s.at_lo;
    out[3] = s.at_hi;
  };
  double tmp[4];
  fill(sums.tf_fb, tmp);
  for (int i = 0; i < 4; ++i) c.tf[i][0] = tmp[i];
  fill(sums.tf_fb2, tmp);
  for (int i = 0; i < 4; ++i) c.tf[i][1] = tmp[i];
  fill(sums.dc_unclamped_fb, tmp);
  for (int i = 0; i < 4; ++i) c.dc[i][0][0] = tmp[i];
  fill(sums.dc_unclamped_fb2, tmp);
  for (int i = 0; i < 4; ++i) c.dc[i][1][0] = tmp[i];
  fill(sums.dc_clamped_fb, tmp);
  for (int i = 0; i < 4; ++i) c.dc[i][0][1] = tmp[i];
  fill(sums.dc_clamped_fb2, tmp);
  for (int i = 0; i < 4; ++i) c.dc[i][1][1] = tmp[i];
  return c;
}

const char* interpretation_name(int i) {
  static const char* names[4] = {"max", "min", "at_lo", "at_hi"};
  return names[i];
}

std::string row_label(const TableRow& ref) {
  std::ostringstream os;
  os << ref.fixed1_name << "=" << fmt6(ref.fixed1);
  if (ref.fixed2_name) os << "," << ref.fixed2_name << "=" << fmt6(ref.fixed2);
  os << ",N=" << ref.n_copies;
  return os.str();
}

Dataset table_dataset(const std::vector<reference::RowComputation>& rows, DcFormula dc) {
  Dataset d;
  d.header = {"family",       "fixed_param_name", "fixed_param_value", "n_copies",
              "cloner",       "range_lo",         "range_hi",          "paper_range_lo",
              "paper_range_hi", "sum_tf_max",     "sum_dc_max",        "paper_sum_tf",
              "paper_sum_dc", "dc_variant",
              // diagnostics
              "fixed_param2_name", "fixed_param2_value", "intervals", "analytic_lo",
              "analytic_hi", "sum_tf_min", "sum_tf_at_lo", "sum_tf_at_hi", "sum_tf_max_fb2",
              "sum_dc_min", "sum_dc_at_lo", "sum_dc_at_hi", "sum_dc_max_unclamped_fb",
              "sum_dc_max_unclamped_fb2", "sum_dc_max_clamped_fb", "sum_dc_max_clamped_fb2"};
  for (const auto& rc : rows) {
    const TableRow& ref = *rc.ref;
    const auto& num = rc.sweep.numeric;
    const auto& sums = rc.sweep.sums;
    const auto& dc_main =
        dc == DcFormula::unclamped ? sums.dc_unclamped_fb : sums.dc_clamped_fb;

    const auto opt = [](bool defined, double v) { return defined ? json_number(v) : json(nullptr); };
    json lo = nullptr, hi = nullptr, alo = nullptr, ahi = nullptr;
    if (!num.empty()) {
      lo = json_number(num.intervals.front().lo);
      hi = json_number(num.intervals.back().hi);
    }
    if (rc.sweep.analytic && !rc.sweep.analytic->empty()) {
      alo = json_number(rc.sweep.analytic->intervals.front().lo);
      ahi = json_number(rc.sweep.analytic->intervals.back().hi);
    }
    d.rows.push_back(
        {broadcast::to_string(ref.family), ref.fixed1_name, json_number(ref.fixed1),
         static_cast<double>(ref.n_copies), cloners::to_string(ref.cloner), lo, hi,
         ref.range.na ? json(nullptr) : json_number(ref.range.lo),
         ref.range.na ? json(nullptr) : json_number(ref.range.hi),
         opt(sums.tf_fb.defined, sums.tf_fb.max_v), opt(dc_main.defined, dc_main.max_v),
         json_number(ref.sum_tf), json_number(ref.sum_dc), measures::to_string(dc),
         ref.fixed2_name ? json(ref.fixed2_name) : json(nullptr),
         ref.fixed2_name ? json_number(ref.fixed2) : json(nullptr),
         static_cast<double>(num.intervals.size()), alo, ahi,
         opt(sums.tf_fb.defined, sums.tf_fb.min_v), opt(sums.tf_fb.defined, sums.tf_fb.at_lo),
         opt(sums.tf_fb.defined, sums.tf_fb.at_hi), opt(sums.tf_fb2.defined, sums.tf_fb2.max_v),
         opt(dc_main.defined, dc_main.min_v), opt(dc_main.defined, dc_main.at_lo),
         opt(dc_main.defined, dc_main.at_hi),
         opt(sums.dc_unclamped_fb.defined, sums.dc_unclamped_fb.max_v),
         opt(sums.dc_unclamped_fb2.defined, sums.dc_unclamped_fb2.max_v),
         opt(sums.dc_clamped_fb.defined, sums.dc_clamped_fb.max_v),
         opt(sums.dc_clamped_fb2.defined, sums.dc_clamped_fb2.max_v)});
  }
  return d;
}

Dataset calibration_dataset(
    const std::map<std::string, std::vector<reference::RowComputation>>& all) {
  Dataset d;
  d.header = {"table",     "row",        "column", "interpretation", "fb_variant",
              "dc_variant", "published", "recomputed", "residual"};
  for (const auto& [table, rows] : all) {
    for (const auto& rc : rows) {
      const TableRow& ref = *rc.ref;
      const SumCandidates cand = candidates_of(rc.sweep.sums);
      const auto push = [&](const char* column, int interp, int fbv, int dcv, double published,
                            double recomputed) {
        d.rows.push_back({table, row_label(ref), column, interpretation_name(interp),
                          fbv == 0 ? "fb" : "fb2",
                          dcv < 0 ? "-" : (dcv == 0 ? "unclamped" : "clamped"),
                          json_number(published),
                          cand.defined ? json_number(recomputed) : json(nullptr),
                          cand.defined ? json_number(recomputed - published) : json(nullptr)});
      };
      if (!std::isnan(ref.sum_tf))
        for (int interp = 0; interp < 4; ++interp)
          for (int fbv = 0; fbv < 2; ++fbv)
            push("sum_tf", interp, fbv, -1, ref.sum_tf, cand.tf[interp][fbv]);
      if (!std::isnan(ref.sum_dc))
        for (int interp = 0; interp < 4; ++interp)
          for (int fbv = 0; fbv < 2; ++fbv)
            for (int dcv = 0; dcv < 2; ++dcv)
              push("sum_dc", interp, fbv, dcv, ref.sum_dc, cand.dc[interp][fbv][dcv]);
    }
  }
  return d;
}

void print_tables_summary(const std::map<std::string, std::vector<reference::RowComputation>>& all,
                          std::ostream& os) {
  os << "== range regression ==\n";
  for (const auto& [table, rows] : all) {
    double worst = 0.0;
    int na_mismatch = 0;
    for (const auto& rc : rows) {
      const bool computed_na = rc.sweep.numeric.empty();
      if (computed_na != rc.ref->range.na) {
        ++na_mismatch;
        continue;
      }
      if (computed_na) continue;
      worst = std::max(worst,
                       std::abs(rc.sweep.numeric.intervals.front().lo - rc.ref->range.lo));
      worst = std::max(worst,
                       std::abs(rc.sweep.numeric.intervals.back().hi - rc.ref->range.hi));
    }
    os << "table " << table << ": max |range endpoint - published| = " << fmt6(worst)
       << (na_mismatch ? ("  (" + std::to_string(na_mismatch) + " NA mismatches)") : "") << "\n";
  }

  // The two appendix tables describe the same sweeps, so their printed range
  // cells must agree; disagreements are flagged with our recomputed value.
  if (all.count("A1") && all.count("A3")) {
    const auto& a1 = all.at("A1");
    const auto& a3 = all.at("A3");
    for (std::size_t i = 0; i < a1.size() && i < a3.size(); ++i) {
      const auto& r1 = a1[i].ref->range;
      const auto& r3 = a3[i].ref->range;
      const bool differ =
          r1.na != r3.na || (!r1.na && (std::abs(r1.lo - r3.lo) > 0.005 ||
                                        std::abs(r1.hi - r3.hi) > 0.005));
      if (differ) {
        os << "inconsistent published range cells (" << row_label(*a1[i].ref) << "): '"
           << (r1.na ? "NA" : fmt6(r1.lo) + "-" + fmt6(r1.hi)) << "' vs '"
           << (r3.na ? "NA" : fmt6(r3.lo) + "-" + fmt6(r3.hi)) << "', recomputed "
           << a1[i].sweep.numeric.to_string() << "\n";
      }
    }
  }

  os << "== sum calibration (max over broadcastable range) ==\n";
  struct Tally {
    int cells = 0, matched = 0;
    double total_abs = 0.0;
  };
  std::map<std::string, Tally> tally;  // convention label -> fit
  std::vector<std::string> unmatched;
  for (const auto& [table, rows] : all) {
    for (const auto& rc : rows) {
      const TableRow& ref = *rc.ref;
      const SumCandidates cand = candidates_of(rc.sweep.sums);
      // The tally scores the max-over-range interpretation per convention;
      // the fallback scan over min/boundary interpretations is evidence for
      // cells the max interpretation cannot explain.
      const auto consider = [&](const char* column, double published,
                                const std::vector<std::pair<std::string, double>>& max_recs,
                                const std::vector<std::pair<std::string, double>>& all_recs) {
        if (std::isnan(published)) return;
        if (!cand.defined) {
          unmatched.push_back("table " + table + " " + row_label(ref) + " " + column +
                              ": published " + fmt6(published) + ", recomputed NA");
          return;
        }
        double best = 1e300;
        for (const auto& [label, v] : max_recs) {
          auto& t = tally[std::string(column) + " " + label];
          ++t.cells;
          const double resid = std::abs(v - published);
          t.total_abs += resid;
          if (resid <= 0.05) ++t.matched;
          best = std::min(best, resid);
        }
        if (best > 0.05) {
          std::string best_label = "-";
          double best_any = 1e300, show = 0.0;
          for (const auto& [label, v] : all_recs) {
            const double resid = std::abs(v - published);
            if (resid < best_any) {
              best_any = resid;
              best_label = label;
              show = v;
            }
          }
          unmatched.push_back("table " + table + " " + row_label(ref) + " " + column +
                              ": published " + fmt6(published) + ", max-interpretation off by " +
                              fmt6(best) + ", closest candidate " + fmt6(show) + " (" +
                              best_label + ", |residual| " + fmt6(best_any) + ")");
        }
      };
      std::vector<std::pair<std::string, double>> tf_max, tf_all, dc_max, dc_all;
      for (int fbv = 0; fbv < 2; ++fbv) {
        const std::string fbl = fbv ? "fb2" : "fb";
        tf_max.emplace_back(fbl, cand.tf[0][fbv]);
        for (int interp = 0; interp < 4; ++interp)
          tf_all.emplace_back(fbl + "," + interpretation_name(interp), cand.tf[interp][fbv]);
        for (int dcv = 0; dcv < 2; ++dcv) {
          const std::string dcl = dcv ? "clamped" : "unclamped";
          dc_max.emplace_back(fbl + "," + dcl, cand.dc[0][fbv][dcv]);
          for (int interp = 0; interp < 4; ++interp)
            dc_all.emplace_back(fbl + "," + dcl + "," + interpretation_name(interp),
                                cand.dc[interp][fbv][dcv]);
        }
      }
      consider("sum_tf", ref.sum_tf, tf_max, tf_all);
      consider("sum_dc", ref.sum_dc, dc_max, dc_all);
    }
  }
  for (const auto& [label, t] : tally) {
    os << label << ": matched " << t.matched << "/" << t.cells
       << " cells within 0.05, mean |residual| " << fmt6(t.total_abs / std::max(t.cells, 1))
       << "\n";
  }
  if (!unmatched.empty()) {
    os << "cells with no convention within 0.05:\n";
    for (const auto& m : unmatched) os << "  " << m << "\n";
  }
}

int cmd_tables(const RunConfig& cfg) {
  require_range(cfg.grid >= 100, "tables: --grid must be at least 100");
  std::vector<std::string> which = cfg.tables;
  if (which.empty() || (which.size() == 1 && which[0] == "all"))
    which = reference::table_names();
  for (const auto& t : which) reference::rows_of(t);  // validate names up front

  std::map<std::string, std::vector<reference::RowComputation>> all;
  for (const auto& t : which) all.emplace(t, reference::regenerate(t, cfg.grid, cfg.dc));

  const std::string dir = cfg.out.empty() ? "tables" : cfg.out;
  fs::create_directories(dir);
  const char* ext = cfg.format == OutputFormat::csv ? ".csv" : ".json";
  for (const auto& t : which) {
    const Dataset d = table_dataset(all.at(t), cfg.dc);
    write_text((fs::path(dir) / ("table" + t + ext)).string(), d.render(cfg.format));
  }
  const Dataset cal = calibration_dataset(all);
  write_text((fs::path(dir) / (std::string("calibration") + ext)).string(),
             cal.render(cfg.format));
  print_tables_summary(all, std::cout);
  std::cout << "wrote " << which.size() << " tables + calibration to " << dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

template <typename T>
T parse_choice(const std::string& value,
               std::initializer_list<std::pair<const char*, T>> choices, const char* what) {
  for (const auto& [name, v] : choices)
    if (value == name) return v;
  throw std::domain_error(std::string("unknown ") + what + " '" + value + "'");
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    if (cfg.command == "state") return cmd_state(cfg);
    if (cfg.command == "report") return cmd_report(cfg);
    if (cfg.command == "range") return cmd_range(cfg);
    if (cfg.command == "tables") return cmd_tables(cfg);
    if (cfg.command == "scatter") return cmd_scatter(cfg);
    if (cfg.command == "surface") return cmd_surface(cfg);
    std::cerr << "error: unknown command '" << cfg.command << "'\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: parameter out of range: " << e.what() << "\n";
    return 2;
  } catch (const qmat::invalid_state_error& e) {
    std::cerr << "error: parameter out of range: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int main_entry(int argc, char** argv) {
  RunConfig cfg;
  std::string family = "werner", cloner = "local", dc = "unclamped", sampler = "hs",
              format = "csv";

  CLI::App app{"entanglement broadcasting via optimal local and nonlocal cloning"};
  app.require_subcommand(1);
  // config file keys live in a [subcommand] section; flags override the file
  app.set_config("--config");
  app.fallthrough();

  const auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", family, "werner | belldiag | random")
        ->check(CLI::IsMember({"werner", "belldiag", "random"}));
    sub->add_option("--p", cfg.p, "werner mixing probability");
    sub->add_option("--alpha2", cfg.alpha2, "werner amplitude parameter alpha^2");
    sub->add_option("--c", cfg.c, "bell-diagonal c1,c2,c3")->delimiter(',')->expected(0, 3);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--sampler", sampler, "hs | bloch")->check(CLI::IsMember({"hs", "bloch"}));
  };
  const auto add_cloner = [&](CLI::App* sub) {
    sub->add_option("--cloner", cloner, "local | nonlocal")
        ->check(CLI::IsMember({"local", "nonlocal"}));
    sub->add_option("--copies", cfg.n_copies, "number of copies (nonlocal: 2..5)");
    sub->add_option("--dc-formula", dc, "unclamped | clamped")
        ->check(CLI::IsMember({"unclamped", "clamped"}));
  };
  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--emit-plot", cfg.emit_plot, "write a gnuplot script next to --out");
  };

  auto* state = app.add_subcommand("state", "inspect one state");
  add_family(state);

  auto* report = app.add_subcommand("report", "broadcast report for one state");
  add_family(report);
  add_cloner(report);

  auto* range = app.add_subcommand("range", "broadcasting range over one parameter");
  add_family(range);
  add_cloner(range);
  range->add_option("--sweep", cfg.swept, "swept variable (p | alpha2 | c1 | c2 | c3)");
  range->add_option("--grid", cfg.grid, "sweep grid points (>= 100)");
  add_output(range);

  auto* tables = app.add_subcommand("tables", "regenerate the reference tables");
  tables->add_option("--which", cfg.tables, "table ids (1..6, A1..A6) or all")->delimiter(',');
  tables->add_option("--grid", cfg.grid, "sweep grid points (>= 100)");
  tables->add_option("--dc-formula", dc, "unclamped | clamped")
      ->check(CLI::IsMember({"unclamped", "clamped"}));
  tables->add_option("--out", cfg.out, "output directory (default: tables)");
  tables->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* scatter = app.add_subcommand("scatter", "random-state complementarity dataset");
  scatter->add_option("--samples", cfg.samples, "number of sampled states");
  scatter->add_option("--seed", cfg.seed, "random seed");
  scatter->add_option("--sampler", sampler, "hs | bloch")->check(CLI::IsMember({"hs", "bloch"}));
  add_cloner(scatter);
  add_output(scatter);

  auto* surface = app.add_subcommand("surface", "werner sums over the (alpha2, p) grid");
  surface->add_option("--grid", cfg.grid, "grid points per axis");
  add_cloner(surface);
  add_output(surface);

  for (auto* sub : {state, report, range, tables, scatter, surface}) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "surface" && !surface->count("--grid")) cfg.grid = 100;
  cfg.family = family == "belldiag" ? Family::belldiag : Family::werner;
  cfg.random_family = family == "random";
  cfg.cloner = parse_choice<Kind>(
      cloner, {{"local", Kind::local}, {"nonlocal", Kind::nonlocal}}, "cloner");
  cfg.dc = parse_choice<DcFormula>(
      dc, {{"unclamped", DcFormula::unclamped}, {"clamped", DcFormula::clamped}}, "dc formula");
  cfg.sampler = parse_choice<states::Sampler>(sampler,
                                              {{"hs", states::Sampler::hilbert_schmidt},
                                               {"bloch", states::Sampler::bloch_rejection}},
                                              "sampler");
  cfg.format = parse_choice<OutputFormat>(
      format, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}, "format");
  return run(cfg);
}

}  // namespace entbroadcast::cli
