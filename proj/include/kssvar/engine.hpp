#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kssvar/config.hpp"
#include "kssvar/rootcount.hpp"

namespace kssvar::engine {

/// Replicate seed: derive_seed(derive_seed(derive_seed(master, m), d), index).
std::uint64_t replicate_seed(std::uint64_t master, unsigned m, unsigned d, std::uint64_t index);

struct ReplicateRecord {
  std::uint64_t replicate = 0;
  std::uint64_t seed = 0;  // seed of the system actually counted
  unsigned m = 0, d = 0;
  unsigned count = 0;
  bool certified = false;
  unsigned unresolved_regions = 0;
  unsigned redraws = 0;    // systems discarded for an equator root
  double wall_time_ms = 0.0;
};

/// Samples and counts one replicate; redraws with derive_seed(seed, attempt) on equator roots.
ReplicateRecord run_replicate(unsigned m, unsigned d, std::uint64_t master, std::uint64_t index,
                              const rootcount::SubdivisionOptions& options = {});

/// Runs the listed replicate indices on `workers` threads; the result is sorted by index.
/// Replicates that throw are reported in `failed` instead.
std::vector<ReplicateRecord> run_replicates(unsigned m, unsigned d, std::uint64_t master,
                                            const std::vector<std::uint64_t>& indices, unsigned workers,
                                            const rootcount::SubdivisionOptions& options,
                                            std::vector<std::uint64_t>* failed = nullptr);

struct MomentEstimate {
  unsigned m = 0, d = 0;
  std::uint64_t n = 0;
  std::uint64_t master_seed = 0;
  double mean = 0.0, variance = 0.0;
  double se_mean = 0.0, se_variance = 0.0, se_variance_m4 = 0.0;
  double normalized_mean = 0.0, normalized_mean_se = 0.0;          // mean / d^{m/2}
  double normalized_variance = 0.0, normalized_variance_se = 0.0;  // variance / d^{m/2}
  double uncertified_fraction = 0.0;
  std::uint64_t redraws = 0;
  double wall_time_s = 0.0;  // not part of the aggregate JSON
};

MomentEstimate aggregate(const std::vector<ReplicateRecord>& records, unsigned m, unsigned d, std::uint64_t master);

/// Monte Carlo moments of the real root count over n replicates.
MomentEstimate estimate_moments(unsigned m, unsigned d, std::uint64_t n, std::uint64_t seed, unsigned workers = 1,
                                const rootcount::SubdivisionOptions& options = {});

std::string replicate_csv_header();
std::string replicate_csv_row(const ReplicateRecord& r);

/// Aggregate JSON (keys sorted, wall time excluded): byte-identical for any worker count.
std::string aggregate_json(const std::vector<MomentEstimate>& estimates);

struct RunReport {
  std::vector<MomentEstimate> estimates;
  std::vector<std::string> files;
  std::uint64_t failed = 0;
  std::uint64_t uncertified = 0;
  std::uint64_t resumed = 0;  // replicates reused from existing CSV files
};

/// Writes replicates_m<m>_d<d>.csv, aggregate.json and manifest.json to config.out_dir.
/// Existing replicate CSVs are resumed: only missing replicate indices are computed.
RunReport run_experiment(const ExperimentConfig& config);

struct CompareRow {
  unsigned d = 0;
  MomentEstimate mc;
  double kac_rice = 0.0;
  double kac_rice_error = 0.0;
  double gap_over_se = 0.0;
  bool gap_flag = false;   // gap exceeds 3 combined errors
  bool mean_flag = false;  // mean / d^{m/2} further than 3 SE from 1
};

struct CompareTable {
  unsigned m = 0;
  std::vector<CompareRow> rows;
  double v_infinity = 0.0, v_infinity_error = 0.0;
  double i2d = 0.0, i2d_se = 0.0;
  double i2d_display = 0.0, i2d_display_se = 0.0;
  unsigned i2d_degree = 0;
};

CompareTable compare_routes(unsigned m, const std::vector<unsigned>& d_list, const ExperimentConfig& config);
std::string to_csv(const CompareTable& table);
std::string to_json(const CompareTable& table);

}  // namespace kssvar::engine
