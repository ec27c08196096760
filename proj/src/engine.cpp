#include "kssvar/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "kssvar/asymptotics.hpp"
#include "kssvar/hermite.hpp"
#include "kssvar/kacrice.hpp"
#include "kssvar/rng.hpp"
#include "kssvar/stats.hpp"

namespace kssvar::engine {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t replicate_seed(std::uint64_t master, unsigned m, unsigned d, std::uint64_t index) {
  return derive_seed(derive_seed(derive_seed(master, m), d), index);
}

ReplicateRecord run_replicate(unsigned m, unsigned d, std::uint64_t master, std::uint64_t index,
                              const rootcount::SubdivisionOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  ReplicateRecord r;
  r.replicate = index;
  r.m = m;
  r.d = d;
  const std::uint64_t base = replicate_seed(master, m, d, index);
  for (unsigned attempt = 0;; ++attempt) {
    const std::uint64_t seed = attempt == 0 ? base : derive_seed(base, attempt);
    const KssSystem sys = sample_system(m, d, seed);
    const auto res = rootcount::count_real_roots(sys, options);
    if (res.equator_root) {
      if (attempt > 16) throw std::runtime_error("run_replicate: repeated equator roots");
      ++r.redraws;
      continue;
    }
    r.seed = seed;
    r.count = res.count;
    r.certified = res.certified;
    r.unresolved_regions = res.unresolved_regions;
    break;
  }
  r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<ReplicateRecord> run_replicates(unsigned m, unsigned d, std::uint64_t master,
                                            const std::vector<std::uint64_t>& indices, unsigned workers,
                                            const rootcount::SubdivisionOptions& options,
                                            std::vector<std::uint64_t>* failed) {
  std::vector<ReplicateRecord> out(indices.size());
  std::vector<char> ok(indices.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < indices.size(); i = next++) {
      try {
        out[i] = run_replicate(m, d, master, indices[i], options);
        ok[i] = 1;
      } catch (const std::exception&) {
        ok[i] = 0;
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<ReplicateRecord> good;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (ok[i])
      good.push_back(out[i]);
    else if (failed)
      failed->push_back(indices[i]);
  }
  std::sort(good.begin(), good.end(), [](const auto& a, const auto& b) { return a.replicate < b.replicate; });
  return good;
}

MomentEstimate aggregate(const std::vector<ReplicateRecord>& records, unsigned m, unsigned d, std::uint64_t master) {
  MomentEstimate e;
  e.m = m;
  e.d = d;
  e.master_seed = master;
  e.n = records.size();
  if (records.size() < 2) throw std::invalid_argument("aggregate: need at least 2 replicates");
  std::vector<double> counts;
  counts.reserve(records.size());
  std::uint64_t uncertified = 0;
  for (const auto& r : records) {
    counts.push_back(r.count);
    uncertified += r.certified ? 0 : 1;
    e.redraws += r.redraws;
    e.wall_time_s += r.wall_time_ms / 1000.0;
  }
  const SampleSummary s = summarize(counts);
  const double scale = std::pow(static_cast<double>(d), 0.5 * m);
  e.mean = s.mean;
  e.variance = s.variance;
  e.se_mean = s.se_mean;
  e.se_variance = s.se_variance;
  e.se_variance_m4 = s.se_variance_m4;
  e.normalized_mean = s.mean / scale;
  e.normalized_mean_se = s.se_mean / scale;
  e.normalized_variance = s.variance / scale;
  e.normalized_variance_se = s.se_variance / scale;
  e.uncertified_fraction = static_cast<double>(uncertified) / static_cast<double>(records.size());
  return e;
}

MomentEstimate estimate_moments(unsigned m, unsigned d, std::uint64_t n, std::uint64_t seed, unsigned workers,
                                const rootcount::SubdivisionOptions& options) {
  if (n < 2) throw std::invalid_argument("estimate_moments: n must be >= 2");
  std::vector<std::uint64_t> idx(n);
  for (std::uint64_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::uint64_t> failed;
  const auto recs = run_replicates(m, d, seed, idx, workers, options, &failed);
  if (!failed.empty()) throw std::runtime_error("estimate_moments: " + std::to_string(failed.size()) + " replicates failed");
  return aggregate(recs, m, d, seed);
}

std::string replicate_csv_header() { return "replicate,seed,m,d,count,certified,unresolved_regions,wall_time_ms"; }

std::string replicate_csv_row(const ReplicateRecord& r) {
  std::ostringstream os;
  os << r.replicate << ',' << r.seed << ',' << r.m << ',' << r.d << ',' << r.count << ',' << (r.certified ? 1 : 0)
     << ',' << r.unresolved_regions << ',' << json(r.wall_time_ms).dump();
  return os.str();
}

namespace {

json estimate_json(const MomentEstimate& e) {
  return json{{"m", e.m},
              {"d", e.d},
              {"n", e.n},
              {"master_seed", e.master_seed},
              {"mean", e.mean},
              {"variance", e.variance},
              {"se_mean", e.se_mean},
              {"se_variance", e.se_variance},
              {"se_variance_m4", e.se_variance_m4},
              {"normalized_mean", e.normalized_mean},
              {"normalized_mean_se", e.normalized_mean_se},
              {"normalized_variance", e.normalized_variance},
              {"normalized_variance_se", e.normalized_variance_se},
              {"uncertified_fraction", e.uncertified_fraction},
              {"redraws", e.redraws}};
}

ReplicateRecord parse_row(const std::string& line) {
  std::stringstream ss(line);
  std::string f[8];
  for (auto& x : f)
    if (!std::getline(ss, x, ',')) throw std::runtime_error("bad replicate row: " + line);
  ReplicateRecord r;
  r.replicate = std::stoull(f[0]);
  r.seed = std::stoull(f[1]);
  r.m = static_cast<unsigned>(std::stoul(f[2]));
  r.d = static_cast<unsigned>(std::stoul(f[3]));
  r.count = static_cast<unsigned>(std::stoul(f[4]));
  r.certified = f[5] == "1";
  r.unresolved_regions = static_cast<unsigned>(std::stoul(f[6]));
  r.wall_time_ms = std::stod(f[7]);
  return r;
}

}  // namespace

std::string aggregate_json(const std::vector<MomentEstimate>& estimates) {
  json j = json::array();
  for (const auto& e : estimates) j.push_back(estimate_json(e));
  return json{{"schema", "kssvar.aggregate/1"}, {"estimates", j}}.dump(2) + "\n";
}

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunReport report;
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  rootcount::SubdivisionOptions opts;
  opts.min_width = config.min_width;
  json manifest{{"schema", "kssvar.manifest/1"}, {"config", config.to_text()}, {"runs", json::array()}};

  for (unsigned d : config.d_list) {
    const fs::path csv = dir / ("replicates_m" + std::to_string(config.m) + "_d" + std::to_string(d) + ".csv");
    std::map<std::uint64_t, ReplicateRecord> done;
    if (fs::exists(csv)) {
      std::ifstream in(csv);
      std::string line;
      std::getline(in, line);
      if (line != replicate_csv_header()) throw std::runtime_error("run_experiment: unexpected header in " + csv.string());
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ReplicateRecord r;
        try {
          r = parse_row(line);
        } catch (const std::exception&) {
          continue;  // truncated last line after an interruption
        }
        if (r.m == config.m && r.d == d && r.replicate < config.n_samples) done[r.replicate] = r;
      }
    }
    report.resumed += done.size();
    std::vector<std::uint64_t> missing;
    for (std::uint64_t i = 0; i < config.n_samples; ++i)
      if (!done.count(i)) missing.push_back(i);
    std::vector<std::uint64_t> failed;
    const auto fresh = run_replicates(config.m, d, config.master_seed, missing, config.workers, opts, &failed);
    for (const auto& r : fresh) done[r.replicate] = r;

    std::vector<ReplicateRecord> all;
    for (const auto& [i, r] : done) all.push_back(r);
    {
      std::ofstream out(csv);
      out << replicate_csv_header() << "\n";
      for (const auto& r : all) out << replicate_csv_row(r) << "\n";
    }
    report.files.push_back(csv.string());
    report.failed += failed.size();
    for (const auto& r : all) report.uncertified += r.certified ? 0 : 1;
    manifest["runs"].push_back(json{{"m", config.m},
                                     {"d", d},
                                     {"requested", config.n_samples},
                                     {"completed", all.size()},
                                     {"failed", failed},
                                     {"file", csv.filename().string()}});
    if (all.size() >= 2) report.estimates.push_back(aggregate(all, config.m, d, config.master_seed));
  }

  const fs::path agg = dir / "aggregate.json";
  std::ofstream(agg) << aggregate_json(report.estimates);
  report.files.push_back(agg.string());
  const fs::path man = dir / "manifest.json";
  std::ofstream(man) << manifest.dump(2) << "\n";
  report.files.push_back(man.string());
  return report;
}

CompareTable compare_routes(unsigned m, const std::vector<unsigned>& d_list, const ExperimentConfig& config) {
  CompareTable t;
  t.m = m;
  rootcount::SubdivisionOptions opts;
  opts.min_width = config.min_width;
  kacrice::QuadratureSpec qs;
  qs.abs_tol = config.quad_abs_tol;
  qs.rel_tol = config.quad_rel_tol;
  qs.g_nodes = config.g_nodes;
  qs.g_samples = config.g_samples;
  for (unsigned d : d_list) {
    CompareRow row;
    row.d = d;
    row.mc = estimate_moments(m, d, config.n_samples, config.master_seed, config.workers, opts);
    const auto kr = kacrice::variance_finite_d(d, m, qs, derive_seed(config.master_seed, 0x6b72));
    row.kac_rice = kr.value;
    row.kac_rice_error = kr.quadrature_error + kr.mc_error;
    const double se = std::hypot(row.mc.normalized_variance_se, row.kac_rice_error);
    row.gap_over_se = se > 0 ? std::fabs(row.mc.normalized_variance - row.kac_rice) / se : 0.0;
    row.gap_flag = row.gap_over_se > 3.0;
    row.mean_flag = std::fabs(row.mc.normalized_mean - 1.0) > 3.0 * row.mc.normalized_mean_se;
    t.rows.push_back(row);
  }
  asymptotics::VInfSpec vs;
  vs.route = config.vinf_route == "direct" ? asymptotics::Route::direct : asymptotics::Route::product;
  vs.g_samples = config.g_samples;
  const auto vi = asymptotics::v_infinity(m, vs, derive_seed(config.master_seed, 0x7669));
  t.v_infinity = vi.value;
  t.v_infinity_error = vi.quadrature_error + vi.mc_error;
  const auto i2 = hermite::i2d_lower_bound(config.i2d_degree, m, qs, config.hermite_samples,
                                           derive_seed(config.master_seed, 0x6932));
  t.i2d = i2.value.value;
  t.i2d_se = i2.value.error;
  t.i2d_display = i2.value_display.value;
  t.i2d_display_se = i2.value_display.error;
  t.i2d_degree = config.i2d_degree;
  return t;
}

std::string to_csv(const CompareTable& t) {
  std::ostringstream os;
  os << "d,mc_mean_norm,mc_mean_se,mc_var_norm,mc_var_se,kac_rice,kac_rice_error,gap_over_se,flag\n";
  for (const auto& r : t.rows)
    os << r.d << ',' << json(r.mc.normalized_mean).dump() << ',' << json(r.mc.normalized_mean_se).dump() << ','
       << json(r.mc.normalized_variance).dump() << ',' << json(r.mc.normalized_variance_se).dump() << ','
       << json(r.kac_rice).dump() << ',' << json(r.kac_rice_error).dump() << ',' << json(r.gap_over_se).dump()
       << ',' << ((r.gap_flag || r.mean_flag) ? "FLAG" : "ok") << "\n";
  os << "inf,,,," << ",v_infinity=" << json(t.v_infinity).dump() << ',' << json(t.v_infinity_error).dump()
     << ",i2d(d=" << t.i2d_degree << ")=" << json(t.i2d).dump() << ',' << (t.i2d <= t.v_infinity + t.v_infinity_error + 3 * t.i2d_se ? "ok" : "FLAG")
     << "\n";
  return os.str();
}

std::string to_json(const CompareTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back(json{{"d", r.d},
                        {"mc", estimate_json(r.mc)},
                        {"kac_rice", r.kac_rice},
                        {"kac_rice_error", r.kac_rice_error},
                        {"gap_over_se", r.gap_over_se},
                        {"gap_flag", r.gap_flag},
                        {"mean_flag", r.mean_flag}});
  return json{{"m", t.m},
              {"rows", rows},
              {"v_infinity", t.v_infinity},
              {"v_infinity_error", t.v_infinity_error},
              {"i2d_degree", t.i2d_degree},
              {"i2d", t.i2d},
              {"i2d_se", t.i2d_se},
              {"i2d_display", t.i2d_display},
              {"i2d_display_se", t.i2d_display_se}}
             .dump(2);
}

}  // namespace kssvar::engine
