#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kssvar {

/// Flat key = value configuration. Lines starting with '#' are comments.
/// Every key may be overridden by an environment variable KSSVAR_<KEY> (upper case).
struct ExperimentConfig {
  unsigned m = 1;
  std::vector<unsigned> d_list{10};
  std::uint64_t n_samples = 1000;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
  bool strict = false;
  std::string out_dir = "kssvar_out";
  // root counting
  double min_width = 1e-9;
  // Kac-Rice quadrature and G sampling
  double quad_abs_tol = 1e-10;
  double quad_rel_tol = 1e-12;
  unsigned g_nodes = 200;
  std::uint64_t g_samples = 200'000;
  // limit variance and Hermite bound
  std::string vinf_route = "direct";
  std::uint64_t hermite_samples = 200'000;
  unsigned i2d_degree = 10000;

  /// Throws std::invalid_argument naming the first offending key.
  void validate() const;

  [[nodiscard]] std::string to_text() const;
  static ExperimentConfig from_text(const std::string& text, bool apply_env = true);
  static ExperimentConfig load(const std::string& path, bool apply_env = true);
  static ExperimentConfig defaults(bool apply_env = true);

  /// Applies one key; throws on unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace kssvar
