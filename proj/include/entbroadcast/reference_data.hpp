#pragma once

#include "entbroadcast/broadcast.hpp"

#include <limits>
#include <string>
#include <vector>

namespace entbroadcast::reference {

/// Placeholder for absent published values ("NA" cells).
inline constexpr double no_value = std::numeric_limits<double>::quiet_NaN();

struct PublishedRange {
  bool na;
  double lo, hi;
  bool lo_open, hi_open;
};

inline constexpr PublishedRange na_range{true, 0, 0, false, false};

/// One row of a published reference table: the broadcasting-range cell and
/// the complementarity-sum cells, together with the sweep that reproduces it.
struct TableRow {
  const char* table;  // "1".."6", "A1".."A6"
  broadcast::Family family;
  cloners::Kind cloner;
  int n_copies;
  const char* swept;        // range-column variable
  const char* fixed1_name;  // first fixed parameter
  double fixed1;
  const char* fixed2_name;  // second fixed parameter, or nullptr
  double fixed2;
  PublishedRange range;
  double sum_tf;  // no_value when the table has no TF column
  double sum_dc;  // no_value when the table has no DC column
};

const std::vector<TableRow>& table_rows();

std::vector<const TableRow*> rows_of(const std::string& table);

const std::vector<std::string>& table_names();

/// A reference row next to its recomputed sweep.
struct RowComputation {
  const TableRow* ref;
  broadcast::SweepRow sweep;
};

/// Recomputes every row of a table (rows run in parallel, results ordered).
std::vector<RowComputation> regenerate(const std::string& table, int grid,
                                       measures::DcFormula dc);

/// Builds the sweep specification reproducing one reference row.
broadcast::SweepSpec sweep_spec_for(const TableRow& row, int grid, measures::DcFormula dc);

}  // namespace entbroadcast::reference
