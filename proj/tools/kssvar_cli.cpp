// kssvar: command-line front end.
//
//   kssvar sample        --m 2 --d 3 --seed 7
//   kssvar count         --m 1 --d 50 --seed 7      (or --system file.json)
//   kssvar mc-moments    --m 1 --d 10,50 --n 10000 --workers 4 --out run1
//   kssvar kac-rice      --m 1 --d 10,100,1000
//   kssvar v-inf         --m 2
//   kssvar hermite-check --m 2
//   kssvar compare       --m 1 --d 10,50 --n 10000 --out cmp
//
// Settings are resolved as defaults < --config file < KSSVAR_<KEY> environment < flags.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kssvar/asymptotics.hpp"
#include "kssvar/config.hpp"
#include "kssvar/engine.hpp"
#include "kssvar/gaussian_matrix.hpp"
#include "kssvar/hermite.hpp"
#include "kssvar/kacrice.hpp"
#include "kssvar/rootcount.hpp"
#include "kssvar/special.hpp"
#include "kssvar/system.hpp"

using nlohmann::json;
using namespace kssvar;

namespace {

struct Flags {
  std::string m, d, n, seed, workers, config, out;
  bool strict = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--m", f.m, "number of variables / equations");
  app->add_option("--d", f.d, "degree, or comma-separated increasing list");
  app->add_option("--n", f.n, "Monte Carlo replicates");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--workers", f.workers, "worker threads");
  app->add_flag("--strict", f.strict, "exit nonzero on any uncertified count");
  app->add_option("--config", f.config, "key = value config file");
  app->add_option("--out", f.out, "output directory");
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig::defaults() : ExperimentConfig::load(f.config);
  if (!f.m.empty()) c.set("m", f.m);
  if (!f.d.empty()) c.set("d", f.d);
  if (!f.n.empty()) c.set("n_samples", f.n);
  if (!f.seed.empty()) c.set("master_seed", f.seed);
  if (!f.workers.empty()) c.set("workers", f.workers);
  if (!f.out.empty()) c.set("out_dir", f.out);
  if (f.strict) c.strict = true;
  c.validate();
  return c;
}

kacrice::QuadratureSpec quad_spec(const ExperimentConfig& c) {
  kacrice::QuadratureSpec q;
  q.abs_tol = c.quad_abs_tol;
  q.rel_tol = c.quad_rel_tol;
  q.g_nodes = c.g_nodes;
  q.g_samples = c.g_samples;
  return q;
}

json estimate(const Estimate& e) { return json{{"value", e.value}, {"se", e.error}}; }

int cmd_sample(const ExperimentConfig& c, bool homogeneous) {
  KssSystem sys = sample_system(c.m, c.d_list.front(), c.master_seed);
  if (homogeneous) sys = homogenize(sys);
  std::cout << to_json(sys) << "\n";
  return 0;
}

int cmd_count(const ExperimentConfig& c, const std::string& system_file) {
  KssSystem sys = [&] {
    if (system_file.empty()) return sample_system(c.m, c.d_list.front(), c.master_seed);
    std::ifstream in(system_file);
    if (!in) throw std::runtime_error("cannot read " + system_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return system_from_json(ss.str());
  }();
  rootcount::SubdivisionOptions opts;
  opts.min_width = c.min_width;
  const auto r = rootcount::count_real_roots(sys, opts);
  std::cout << json{{"m", sys.m()},
                    {"d", sys.d()},
                    {"seed", sys.seed()},
                    {"count", r.count},
                    {"certified", r.certified},
                    {"unresolved_regions", r.unresolved_regions},
                    {"bezout_cap", r.bezout_cap},
                    {"method", rootcount::to_string(r.method)},
                    {"equator_root", r.equator_root}}
                   .dump(2)
            << "\n";
  return c.strict && !r.certified ? 2 : 0;
}

int cmd_mc(const ExperimentConfig& c) {
  const auto report = engine::run_experiment(c);
  std::cout << engine::aggregate_json(report.estimates);
  std::cerr << "replicates resumed " << report.resumed << ", failed " << report.failed << ", uncertified "
            << report.uncertified << "\n";
  for (const auto& f : report.files) std::cerr << "wrote " << f << "\n";
  if (report.failed > 0) return 3;
  return c.strict && report.uncertified > 0 ? 2 : 0;
}

int cmd_kac_rice(const ExperimentConfig& c) {
  std::cout << "d,m,variance_finite_d,quadrature_error,mc_error,g_se_max\n";
  for (unsigned d : c.d_list) {
    const auto r = kacrice::variance_finite_d(d, c.m, quad_spec(c), c.master_seed);
    std::cout << d << ',' << c.m << ',' << json(r.value).dump() << ',' << json(r.quadrature_error).dump() << ','
              << json(r.mc_error).dump() << ',' << json(r.g_se_max).dump() << "\n";
  }
  return 0;
}

int cmd_v_inf(const ExperimentConfig& c) {
  asymptotics::VInfSpec s;
  s.route = c.vinf_route == "product" ? asymptotics::Route::product : asymptotics::Route::direct;
  s.g_samples = c.g_samples;
  const auto r = asymptotics::v_infinity(c.m, s, c.master_seed);
  std::cout << json{{"m", c.m},
                    {"value", r.value},
                    {"quadrature_error", r.quadrature_error},
                    {"mc_error", r.mc_error},
                    {"nodes", r.nodes},
                    {"route", c.vinf_route}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_hermite(const ExperimentConfig& c) {
  const unsigned m = c.m;
  const hermite::DetSample sample(m, c.hermite_samples, c.master_seed);
  json f = json::array();
  for (const auto& beta : hermite::multi_indices(m * m, m <= 2 ? 2 : 1)) {
    f.push_back(json{{"beta", beta}, {"f", estimate(sample.f_coefficient(beta))}});
  }
  json b = json::array();
  for (const auto& alpha : hermite::multi_indices(m, 4)) {
    b.push_back(json{{"alpha", alpha}, {"b", hermite::b_coefficient(alpha)}});
  }
  const auto ft = hermite::f_tilde_22(m, c.hermite_samples, c.master_seed);
  double chi = 1.0;
  for (unsigned k = 1; k <= m; ++k) chi *= m_kj(k, 1.0);
  std::cout << json{{"m", m},
                    {"samples", c.hermite_samples},
                    {"mean_abs_det", estimate(sample.mean_abs_det())},
                    {"mean_abs_det_exact", chi},
                    {"f_tilde_22_display", estimate(ft.display)},
                    {"f_tilde_22_coefficient", estimate(ft.coefficient)},
                    {"f", f},
                    {"b", b}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_compare(const ExperimentConfig& c) {
  const auto t = engine::compare_routes(c.m, c.d_list, c);
  std::cout << engine::to_csv(t);
  if (!c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    const std::string stem = c.out_dir + "/compare_m" + std::to_string(c.m);
    std::ofstream(stem + ".csv") << engine::to_csv(t);
    std::ofstream(stem + ".json") << engine::to_json(t) << "\n";
  }
  bool flagged = false;
  for (const auto& r : t.rows) flagged = flagged || r.gap_flag || r.mean_flag;
  return c.strict && flagged ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KSS random polynomial systems: real root counts and their variance"};
  app.require_subcommand(1);
  Flags f;
  bool homogeneous = false;
  std::string system_file;

  auto* sample = app.add_subcommand("sample", "draw a KSS system and print it as JSON");
  add_common(sample, f);
  sample->add_flag("--homogeneous", homogeneous, "print the homogenized form");
  auto* count = app.add_subcommand("count", "count the real roots of one system");
  add_common(count, f);
  count->add_option("--system", system_file, "system JSON (default: sample from --m --d --seed)");
  auto* mc = app.add_subcommand("mc-moments", "Monte Carlo moments of the root count");
  add_common(mc, f);
  auto* kr = app.add_subcommand("kac-rice", "finite-degree variance by the Rice formula");
  add_common(kr, f);
  auto* vi = app.add_subcommand("v-inf", "limit variance");
  add_common(vi, f);
  auto* he = app.add_subcommand("hermite-check", "chaos coefficients of |det|");
  add_common(he, f);
  auto* cmp = app.add_subcommand("compare", "Monte Carlo vs Rice formula vs limit");
  add_common(cmp, f);

  CLI11_PARSE(app, argc, argv);
  try {
    const ExperimentConfig c = resolve(f);
    if (*sample) return cmd_sample(c, homogeneous);
    if (*count) return cmd_count(c, system_file);
    if (*mc) return cmd_mc(c);
    if (*kr) return cmd_kac_rice(c);
    if (*vi) return cmd_v_inf(c);
    if (*he) return cmd_hermite(c);
    if (*cmp) return cmd_compare(c);
  } catch (const std::exception& e) {
    std::cerr << "kssvar: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
