#pragma once

#include "entbroadcast/broadcast.hpp"

#include <string>
#include <vector>

namespace entbroadcast::cli {

enum class OutputFormat { csv, json };

/// Parsed command line; every flag validated before any computation starts.
struct RunConfig {
  std::string command;  // state | range | report | tables | scatter | surface
  broadcast::Family family = broadcast::Family::werner;
  bool random_family = false;  // state/report on a sampled state
  double p = -1.0, alpha2 = -1.0;
  std::vector<double> c;  // c1,c2,c3
  cloners::Kind cloner = cloners::Kind::local;
  int n_copies = 2;
  int grid = 1000;
  measures::DcFormula dc = measures::DcFormula::unclamped;
  states::Sampler sampler = states::Sampler::hilbert_schmidt;
  std::uint64_t seed = 42;
  int samples = 5000;
  std::string swept;                 // range: swept variable (inferred for werner)
  std::vector<std::string> tables;   // tables: which ones
  std::string out;                   // file (range/scatter/surface) or directory (tables)
  OutputFormat format = OutputFormat::csv;
  bool emit_plot = false;
};

/// Runs one parsed command. Returns the process exit code (0 on success,
/// 2 on parameter validation failures, 1 otherwise).
int run(const RunConfig& config);

/// Full command line entry point (parse + run).
int main_entry(int argc, char** argv);

}  // namespace entbroadcast::cli
