#include "entbroadcast/reference_data.hpp"

#include <cstring>
#include <stdexcept>

namespace entbroadcast::reference {

namespace {

using broadcast::Family;
using cloners::Kind;

constexpr double NA = no_value;

constexpr PublishedRange open_hi(double lo, double hi = 1.0) { return {false, lo, hi, true, false}; }
constexpr PublishedRange open_open(double lo, double hi) { return {false, lo, hi, true, true}; }
constexpr PublishedRange closed_closed(double lo, double hi) { return {false, lo, hi, false, false}; }
constexpr PublishedRange closed_open(double lo, double hi) { return {false, lo, hi, false, true}; }
constexpr PublishedRange point(double v) { return {false, v, v, false, false}; }

std::vector<TableRow> build_rows() {
  std::vector<TableRow> rows;

  // Werner-like, local cloner, range over p at fixed alpha2.
  const struct {
    double a2, lo, stf, sdc;
  } t1[] = {{0.2, 0.87, 1.061, 2.017},
            {0.4, 0.76, 1.096, 2.221},
            {0.5, 0.75, 1.099, 2.244},
            {0.6, 0.76, 1.096, 2.221},
            {0.8, 0.87, 1.061, 2.017}};
  for (const auto& r : t1)
    rows.push_back({"1", Family::werner, Kind::local, 2, "p", "alpha2", r.a2, nullptr, 0,
                    open_hi(r.lo), r.stf, r.sdc});

  // Werner-like, local cloner, range over alpha2 at fixed p.
  const struct {
    double p, lo, hi, stf, sdc;
  } t2[] = {{0.76, 0.40, 0.60, 1.097, 1.708}, {0.80, 0.29, 0.71, 1.091, 1.786},
            {0.85, 0.22, 0.78, 1.077, 1.892}, {0.90, 0.17, 0.83, 1.055, 2.007},
            {0.95, 0.14, 0.87, 1.014, 2.134}, {1.00, 0.11, 0.89, 0.864, 2.224}};
  for (const auto& r : t2)
    rows.push_back({"2", Family::werner, Kind::local, 2, "alpha2", "p", r.p, nullptr, 0,
                    open_open(r.lo, r.hi), r.stf, r.sdc});

  // Werner-like, nonlocal cloner (two copies), range over p.
  const struct {
    double a2, lo, stf, sdc;
  } t3[] = {{0.2, 0.64, 1.071, 1.894},
            {0.4, 0.56, 1.088, 2.057},
            {0.5, 0.55, 1.090, 2.075},
            {0.6, 0.56, 1.088, 2.057},
            {0.8, 0.64, 1.071, 1.894}};
  for (const auto& r : t3)
    rows.push_back({"3", Family::werner, Kind::nonlocal, 2, "p", "alpha2", r.a2, nullptr, 0,
                    open_hi(r.lo), r.stf, r.sdc});

  // Werner-like, nonlocal cloner, range over alpha2.
  const struct {
    double p, lo, hi, stf, sdc;
  } t4[] = {{0.56, 0.42, 0.58, 1.083, 1.322}, {0.65, 0.19, 0.81, 1.089, 1.432},
            {0.75, 0.10, 0.90, 1.089, 1.577}, {0.85, 0.06, 0.94, 1.077, 1.753},
            {0.95, 0.04, 0.96, 1.032, 1.970}, {1.00, 0.03, 0.97, 0.900, 2.057}};
  for (const auto& r : t4)
    rows.push_back({"4", Family::werner, Kind::nonlocal, 2, "alpha2", "p", r.p, nullptr, 0,
                    open_open(r.lo, r.hi), r.stf, r.sdc});

  // Bell-diagonal, local cloner, range over c3 at fixed (c1, c2).
  const struct {
    double c1, c2;
    PublishedRange range;
    double stf, sdc;
  } t5[] = {{-0.875, -0.875, closed_closed(-1.0, -0.75), 1.070, 2.054},
            {-0.750, -0.750, closed_open(-1.0, -0.75), 1.099, 1.911},
            {-0.875, -0.750, closed_open(-0.875, -0.625), 1.079, 1.866},
            {-0.750, -0.875, closed_open(-0.875, -0.625), 1.079, 1.866}};
  for (const auto& r : t5)
    rows.push_back({"5", Family::belldiag, Kind::local, 2, "c3", "c1", r.c1, "c2", r.c2, r.range,
                    r.stf, r.sdc});

  // Bell-diagonal, nonlocal cloner (two copies), range over c3.
  const double f79 = 7.0 / 9.0, f59 = 5.0 / 9.0, f13 = 1.0 / 3.0;
  const struct {
    double c1, c2;
    PublishedRange range;
    double stf, sdc;
  } t6[] = {{-f79, -f79, closed_closed(-1.0, -f59), 1.088, 1.811},
            {-f59, -f59, closed_open(-1.0, -f59), 1.083, 1.665},
            {-f79, -f59, closed_open(-f79, -f13), 1.078, 1.556},
            {-f59, -f79, closed_open(-f79, -f13), 1.078, 1.556}};
  for (const auto& r : t6)
    rows.push_back({"6", Family::belldiag, Kind::nonlocal, 2, "c3", "c1", r.c1, "c2", r.c2,
                    r.range, r.stf, r.sdc});

  // Appendix: Werner-like, 1->N nonlocal cloning, N = 2..5.
  // A1: TF sums by alpha2; A3: DC sums over the same rows.
  struct MultiCell {
    PublishedRange range;
    double sum;
  };
  const struct {
    double a2;
    MultiCell tf[4];
    MultiCell dc[4];  // A3 range cells may disagree with A1 (kept as printed)
  } a13[] = {
      {0.2,
       {{open_hi(0.64), 1.071}, {open_hi(0.82), 1.057}, {open_hi(0.96), 0.955}, {na_range, NA}},
       {{open_hi(0.64), 1.894}, {open_hi(0.82), 2.007}, {open_hi(0.96), 2.043}, {na_range, NA}}},
      {0.4,
       {{open_hi(0.56), 1.088}, {open_hi(0.72), 1.098}, {open_hi(0.84), 1.075}, {open_hi(0.93), 1.018}},
       {{open_hi(0.56), 2.057}, {open_hi(0.72), 2.203}, {open_hi(0.84), 2.253}, {open_hi(0.93), 2.276}}},
      {0.5,
       {{open_hi(0.55), 1.090}, {open_hi(0.71), 1.101}, {open_hi(0.83), 1.082}, {open_hi(0.84), 1.030}},
       {{open_hi(0.55), 2.075}, {open_hi(0.71), 2.226}, {open_hi(0.83), 2.277}, {open_hi(0.92), 2.301}}},
      {0.6,
       {{open_hi(0.56), 1.088}, {open_hi(0.72), 1.098}, {open_hi(0.84), 1.075}, {open_hi(0.84), 1.018}},
       {{open_hi(0.56), 2.057}, {open_hi(0.72), 2.203}, {open_hi(0.84), 2.253}, {open_hi(0.93), 2.276}}},
      {0.8,
       {{open_hi(0.64), 1.071}, {open_hi(0.82), 1.057}, {open_hi(0.96), 0.955}, {na_range, NA}},
       {{open_hi(0.64), 1.894}, {open_hi(0.82), 2.007}, {open_hi(0.96), 2.043}, {na_range, NA}}}};
  for (const auto& r : a13)
    for (int n = 2; n <= 5; ++n) {
      rows.push_back({"A1", Family::werner, Kind::nonlocal, n, "p", "alpha2", r.a2, nullptr, 0,
                      r.tf[n - 2].range, r.tf[n - 2].sum, NA});
      rows.push_back({"A3", Family::werner, Kind::nonlocal, n, "p", "alpha2", r.a2, nullptr, 0,
                      r.dc[n - 2].range, NA, r.dc[n - 2].sum});
    }

  // A2: TF sums by p; A4: DC sums over the same rows.
  const struct {
    double p;
    MultiCell tf[4];
    MultiCell dc[4];
  } a24[] = {
      {0.56,
       {{open_open(0.42, 0.58), 1.083}, {na_range, NA}, {na_range, NA}, {na_range, NA}},
       {{open_open(0.42, 0.58), 1.322}, {na_range, NA}, {na_range, NA}, {na_range, NA}}},
      {0.65,
       {{open_open(0.19, 0.81), 1.089}, {na_range, NA}, {na_range, NA}, {na_range, NA}},
       {{open_open(0.19, 0.81), 1.432}, {na_range, NA}, {na_range, NA}, {na_range, NA}}},
      {0.75,
       {{open_open(0.10, 0.90), 1.089}, {open_open(0.42, 0.58), 1.098}, {na_range, NA}, {na_range, NA}},
       {{open_open(0.10, 0.90), 1.577}, {open_open(0.42, 0.58), 1.677}, {na_range, NA}, {na_range, NA}}},
      {0.85,
       {{open_open(0.06, 0.94), 1.077}, {open_open(0.17, 0.83), 1.078}, {open_open(0.61, 0.79), 1.071}, {na_range, NA}},
       {{open_open(0.06, 0.94), 1.753}, {open_open(0.17, 0.83), 1.876}, {open_open(0.61, 0.79), 1.897}, {na_range, NA}}},
      {0.95,
       {{open_open(0.04, 0.96), 1.032}, {open_open(0.11, 0.89), 1.017}, {open_open(0.45, 0.89), 1.007}, {open_open(0.60, 0.80), 0.996}},
       {{open_open(0.04, 0.96), 1.970}, {open_open(0.11, 0.89), 2.116}, {open_open(0.45, 0.89), 2.165}, {open_open(0.60, 0.80), 2.165}}},
      {1.00,
       {{open_open(0.03, 0.97), 0.900}, {open_open(0.08, 0.92), 0.867}, {open_open(0.41, 0.92), 0.850}, {open_open(0.52, 0.85), 0.840}},
       {{open_open(0.03, 0.97), 2.057}, {open_open(0.08, 0.92), 2.205}, {open_open(0.41, 0.92), 2.256}, {open_open(0.45, 0.89), 2.279}}}};
  for (const auto& r : a24)
    for (int n = 2; n <= 5; ++n) {
      rows.push_back({"A2", Family::werner, Kind::nonlocal, n, "alpha2", "p", r.p, nullptr, 0,
                      r.tf[n - 2].range, r.tf[n - 2].sum, NA});
      rows.push_back({"A4", Family::werner, Kind::nonlocal, n, "alpha2", "p", r.p, nullptr, 0,
                      r.dc[n - 2].range, NA, r.dc[n - 2].sum});
    }

  // A5 / A6: Bell-diagonal, 1->N nonlocal cloning, range over c1 at fixed
  // (c3, c2). Some cells publish a range but no sum; those sums stay NA.
  const struct {
    double c3, c2;
    MultiCell tf[4];
    MultiCell dc[4];
  } a56[] = {
      {0.56, -0.56,
       {{open_hi(0.55), 1.084}, {na_range, NA}, {na_range, NA}, {na_range, NA}},
       {{open_hi(0.55), 1.667}, {na_range, NA}, {na_range, NA}, {na_range, NA}}},
      {0.74, -0.74,
       {{open_hi(0.48), 1.089}, {open_hi(0.67), 1.099}, {na_range, NA}, {na_range, NA}},
       {{open_hi(0.48), 1.505}, {open_hi(0.67), 1.888}, {na_range, NA}, {na_range, NA}}},
      {0.87, -0.87,
       {{open_hi(0.74), 1.074}, {open_hi(0.74), 1.073}, {point(1.0), 0.925}, {na_range, NA}},
       {{open_hi(0.74), 1.900}, {open_hi(0.74), 2.031}, {point(1.0), NA}, {na_range, NA}}},
      {1.00, -1.00,
       {{point(1.0), 0.900}, {point(1.0), 0.867}, {point(1.0), 0.850}, {point(1.0), 0.840}},
       {{point(1.0), NA}, {point(1.0), NA}, {point(1.0), NA}, {point(1.0), NA}}}};
  for (const auto& r : a56)
    for (int n = 2; n <= 5; ++n) {
      rows.push_back({"A5", Family::belldiag, Kind::nonlocal, n, "c1", "c3", r.c3, "c2", r.c2,
                      r.tf[n - 2].range, r.tf[n - 2].sum, NA});
      rows.push_back({"A6", Family::belldiag, Kind::nonlocal, n, "c1", "c3", r.c3, "c2", r.c2,
                      r.dc[n - 2].range, NA, r.dc[n - 2].sum});
    }

  return rows;
}

}  // namespace

const std::vector<TableRow>& table_rows() {
  static const std::vector<TableRow> rows = build_rows();
  return rows;
}

std::vector<const TableRow*> rows_of(const std::string& table) {
  std::vector<const TableRow*> out;
  for (const auto& r : table_rows())
    if (table == r.table) out.push_back(&r);
  if (out.empty()) throw std::domain_error("unknown table '" + table + "'");
  return out;
}

const std::vector<std::string>& table_names() {
  static const std::vector<std::string> names = {"1",  "2",  "3",  "4",  "5",  "6",
                                                 "A1", "A2", "A3", "A4", "A5", "A6"};
  return names;
}

broadcast::SweepSpec sweep_spec_for(const TableRow& row, int grid, measures::DcFormula dc) {
  broadcast::SweepSpec spec;
  spec.family = row.family;
  spec.cloner = row.cloner;
  spec.n_copies = row.n_copies;
  spec.dc = dc;
  spec.swept = row.swept;
  spec.grid = grid;

  const auto assign = [&spec](const char* name, double value) {
    if (!name) return;
    if (std::strcmp(name, "p") == 0)
      spec.p = value;
    else if (std::strcmp(name, "alpha2") == 0)
      spec.alpha2 = value;
    else if (std::strcmp(name, "c1") == 0)
      spec.c1 = value;
    else if (std::strcmp(name, "c2") == 0)
      spec.c2 = value;
    else if (std::strcmp(name, "c3") == 0)
      spec.c3 = value;
    else
      throw std::domain_error(std::string("unknown fixed parameter '") + name + "'");
  };
  assign(row.fixed1_name, row.fixed1);
  assign(row.fixed2_name, row.fixed2);
  return spec;
}

std::vector<RowComputation> regenerate(const std::string& table, int grid,
                                       measures::DcFormula dc) {
  const auto refs = rows_of(table);
  std::vector<RowComputation> out(refs.size());
  broadcast::run_parallel(refs.size(), [&](std::size_t i) {
    out[i] = {refs[i], broadcast::sweep(sweep_spec_for(*refs[i], grid, dc))};
  });
  return out;
}

}  // namespace entbroadcast::reference
