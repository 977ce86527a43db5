#ifndef BNSL_SWEEP_HPP
#define BNSL_SWEEP_HPP

#include <optional>

#include "bnsl/algorithms.hpp"

namespace bnsl {

// One experiment grid: for every (d, r) cell, epsilon = d/r, one
// deterministic naive count and `repetitions` active runs on derived seeds.
struct ExperimentConfig {
  std::vector<int> d_values;
  std::vector<double> r_values;
  int k = 2;
  double delta = 0.05;
  double epsilon1 = 0.03125;  // 2^-5
  int repetitions = 10;
  std::uint64_t seed = 0;
  SamplerMode mode = SamplerMode::kOracle;
  std::string output_dir;
  SearchOptions search;

  std::string to_json(int indent = 2) const;
  static ExperimentConfig from_json(const std::string& text);
};

struct SweepCell {
  double r = 0;
  int d = 0;
  double epsilon = 0;
  std::uint64_t cell_seed = 0;
  std::string error;  // empty on success
  std::uint64_t n_naive = 0;
  std::vector<std::uint64_t> active_totals;
  std::vector<double> accepted_fractions;

  double active_mean() const;
  double active_std() const;  // sample standard deviation
  double accepted_mean() const;
  double accepted_std() const;
  double sample_ratio() const { return active_mean() / static_cast<double>(n_naive); }
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepCell> cells;  // r-major, then d, matching the config lists
};

SweepResult run_sweep(const ExperimentConfig& config);

// RFC 4180 (CRLF, quoted fields where needed).  Columns:
// r,d,epsilon,n_naive,n_active_mean,n_active_std,sample_ratio,
// accepted_fraction_mean,accepted_fraction_std,cell_seed,error
std::string sweep_csv(const SweepResult& result);

// Tidy per-algorithm counts for plotting: r,d,algo,n
std::string fig3_csv(const SweepResult& result);

// Reference naive counts (for instance the published table that this
// harness reproduces) as (r, d) -> count; flags cells deviating by more
// than the given tolerance factor.
struct ReferenceDeviation {
  double r = 0;
  int d = 0;
  std::uint64_t reference = 0;
  std::uint64_t computed = 0;
  double factor = 0;
};
std::vector<ReferenceDeviation> check_reference_counts(const SweepResult& result,
                                                       const std::string& reference_csv,
                                                       double tolerance_factor);

}  // namespace bnsl

#endif
