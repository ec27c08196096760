// End-to-end acceptance run. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kssvar/asymptotics.hpp"
#include "kssvar/config.hpp"
#include "kssvar/engine.hpp"
#include "kssvar/gaussian_matrix.hpp"
#include "kssvar/hermite.hpp"
#include "kssvar/kacrice.hpp"
#include "kssvar/quadrature.hpp"
#include "kssvar/rng.hpp"
#include "kssvar/rootcount.hpp"
#include "oracles.hpp"

using namespace kssvar;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string f6(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

struct Run {
  std::vector<engine::ReplicateRecord> records;
  engine::MomentEstimate est;
};

std::map<std::pair<unsigned, unsigned>, Run> runs;

const Run& mc_run(unsigned m, unsigned d, std::uint64_t n) {
  auto& r = runs[{m, d}];
  if (r.records.empty()) {
    std::vector<std::uint64_t> idx(n);
    for (std::uint64_t i = 0; i < n; ++i) idx[i] = i;
    r.records = engine::run_replicates(m, d, kSeed, idx, 1, {});
    r.est = engine::aggregate(r.records, m, d, kSeed);
  }
  return r;
}

Outcome mean_law() {
  Outcome o;
  const std::vector<std::tuple<unsigned, unsigned, std::uint64_t>> plan{
      {1, 2, 10000}, {1, 10, 10000}, {1, 50, 10000}, {1, 200, 10000}, {2, 2, 2000}, {2, 3, 2000}, {2, 5, 2000}};
  for (auto [m, d, n] : plan) {
    const auto& e = mc_run(m, d, n).est;
    const double z = (e.normalized_mean - 1.0) / e.normalized_mean_se;
    o.note("m=" + std::to_string(m) + ",d=" + std::to_string(d) + ":" + f6(e.normalized_mean) + " z=" + f6(z));
    o.require(std::fabs(z) <= 3.0, "mean at m=" + std::to_string(m) + " d=" + std::to_string(d));
  }
  return o;
}

Outcome dual_route() {
  Outcome o;
  for (unsigned d : {10u, 50u}) {
    const auto& e = mc_run(1, d, 10000).est;
    const auto kr = kacrice::variance_finite_d(d, 1);
    const double gap = std::fabs(e.normalized_variance - kr.value);
    o.note("d=" + std::to_string(d) + " MC " + f6(e.normalized_variance) + "+-" + f6(e.normalized_variance_se) +
           " KR " + f6(kr.value));
    o.require(gap <= 3 * e.normalized_variance_se, "variance gap at d=" + std::to_string(d));
  }
  return o;
}

Outcome convergence() {
  Outcome o;
  const auto vi = asymptotics::v_infinity(1);
  const double err = vi.quadrature_error + vi.mc_error;
  o.note("V=" + f6(vi.value) + " err=" + f6(err));
  o.require(err < 0.005 * vi.value, "limit error bar");
  double prev = 1e300, last = 0.0;
  for (unsigned d : {100u, 1000u, 10000u}) {
    const auto r = kacrice::variance_finite_d(d, 1);
    const double gap = std::fabs(r.value - vi.value);
    o.note("d=" + std::to_string(d) + ":" + f6(r.value));
    o.require(gap < prev, "monotone gap at d=" + std::to_string(d));
    prev = gap;
    last = gap / vi.value;
  }
  o.require(last < 0.02, "final relative gap");
  return o;
}

Outcome positivity() {
  Outcome o;
  for (unsigned m : {1u, 2u}) {
    const auto ib = hermite::i2d_lower_bound(10000, m, {}, 1000000, derive_seed(kSeed, 40 + m));
    asymptotics::VInfSpec s;
    s.g_samples = 1000000;
    const auto vi = asymptotics::v_infinity(m, s, derive_seed(kSeed, 50 + m));
    const double verr = vi.quadrature_error + vi.mc_error;
    o.note("m=" + std::to_string(m) + " I2=" + f6(ib.value.value) + "+-" + f6(ib.value.error) + " V=" + f6(vi.value) +
           "+-" + f6(verr) + " (display normalization I2=" + f6(ib.value_display.value) + ")");
    o.require(ib.value.value > 5 * std::hypot(ib.value.error, ib.quadrature_error), "I2 > 0 at m=" + std::to_string(m));
    o.require(ib.value.value <= vi.value + verr + 3 * ib.value.error, "I2 <= V at m=" + std::to_string(m));
  }
  return o;
}

Outcome kernel_limits() {
  Outcome o;
  double worst = 0.0;
  for (double z : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto k = kacrice::scaled_kernel(z, 1000000);
    const double e = std::exp(-0.5 * z * z);
    const double da = std::fabs(k.a + z * e), db = std::fabs(k.b - (1 - z * z) * e), dc = std::fabs(k.c - e);
    const double ds = std::fabs(k.sigma_sq - asymptotics::sigma_bar_sq(z)), dr = std::fabs(k.rho - asymptotics::rho_bar(z));
    worst = std::max({worst, da, db, dc, ds, dr});
    o.require(da < 1e-3 && db < 1e-3 && dc < 1e-4 && ds < 1e-3 && dr < 1e-3, "z=" + f6(z));
  }
  o.note("max deviation " + f6(worst));
  return o;
}

Outcome bound_suite() {
  Outcome o;
  const double alpha = 0.4;
  const unsigned d0 = 16;
  double c_fit = 0.0;
  int points = 0;
  for (unsigned i = 0; i < 10; ++i) {
    const unsigned d = d0 + 1 + i * i * 111;
    const double zmax = 0.5 * pi * std::sqrt(double(d));
    for (int j = 1; j <= 50; ++j) {
      const double z = zmax * j / 50.0;
      const auto k = kacrice::scaled_kernel(z, d);
      const double e = std::exp(-alpha * z * z);
      ++points;
      o.require(k.c <= k.dd + 1e-15 && k.dd <= e + 1e-15, "C <= D <= exp at d=" + std::to_string(d));
      o.require(std::fabs(k.a) <= z * e + 1e-15, "|A| bound at d=" + std::to_string(d));
      o.require(std::fabs(k.b) <= (1 + z * z) * e + 1e-15, "|B| bound at d=" + std::to_string(d));
      o.require(1 - k.sigma_sq >= 0.0, "1 - sigma^2 >= 0");
      c_fit = std::max(c_fit, (1 - k.sigma_sq) * std::exp(2 * alpha * z * z));
    }
  }
  o.require(c_fit < 2.0, "1 - sigma^2 <= C exp(-2 alpha z^2) with C = 2");
  o.note(std::to_string(points) + " grid points, fitted C=" + f6(c_fit));
  // symmetrization
  double sym = 0.0;
  kacrice::GFunction g1 = [](const kacrice::ScaledKernel& k) { return g_exact_m1(k.rho); };
  kacrice::GFunction g2 = [](const kacrice::ScaledKernel& k) { return g_functional(k.rho, k.dd, 2, 2000, 1).value; };
  for (unsigned d : {10u, 11u, 100u, 101u}) {
    const double zmax = std::sqrt(double(d)) * pi;
    for (int j = 1; j < 20; ++j) {
      const double z = 0.5 * zmax * j / 20.0;
      for (unsigned m : {1u, 2u}) {
        const auto& g = m == 1 ? g1 : g2;
        const double a = kacrice::variance_integrand(z, d, m, g), b = kacrice::variance_integrand(zmax - z, d, m, g);
        sym = std::max(sym, std::fabs(a - b) / (1 + std::fabs(a)));
      }
    }
  }
  o.require(sym < 1e-10, "symmetrization");
  o.note("symmetrization defect " + f6(sym));
  return o;
}

Outcome g_identities() {
  Outcome o;
  for (unsigned m : {1u, 2u, 3u}) {
    const auto g0 = g_functional(0.0, 0.0, m, 1000000, derive_seed(kSeed, 70 + m), false);
    const auto g1 = g_functional(1.0, 1.0, m, 1000000, derive_seed(kSeed, 80 + m), false);
    const double z0 = (g0.value - g_at_origin(m)) / g0.error;
    const double z1 = (g1.value - std::tgamma(m + 1.0)) / g1.error;
    o.note("m=" + std::to_string(m) + " z(G00)=" + f6(z0) + " z(G11)=" + f6(z1));
    o.require(std::fabs(z0) <= 3, "G(0,0) at m=" + std::to_string(m));
    o.require(std::fabs(z1) <= 3, "G(1,1) at m=" + std::to_string(m));
  }
  return o;
}

Outcome hermite_suite() {
  Outcome o;
  o.require(hermite::hermite_eval(2, 2.0) == 3.0 && hermite::hermite_eval(3, 1.0) == -2.0, "recurrence values");
  const auto gh = quad::gauss_hermite(200);
  double orth = 0.0;
  for (unsigned n = 0; n <= 10; ++n)
    for (unsigned k = 0; k <= 10; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < gh.nodes.size(); ++i)
        s += gh.weights[i] * hermite::hermite_eval(n, gh.nodes[i]) * hermite::hermite_eval(k, gh.nodes[i]);
      orth = std::max(orth, std::fabs(s - (n == k ? std::tgamma(n + 1.0) : 0.0)) / std::sqrt(std::tgamma(n + 1.0) * std::tgamma(k + 1.0)));
    }
  o.require(orth < 1e-10, "Gauss-Hermite orthogonality");
  const auto me = hermite::mehler_check(0.7, 1000000, derive_seed(kSeed, 90));
  o.require(std::fabs(me.value - 0.98) < 3 * me.error, "Mehler 2 rho^2");
  const std::vector<unsigned> a2{2};
  const double beps = std::fabs(hermite::b_epsilon(a2, 1e-3) - hermite::b_coefficient(a2));
  o.require(beps < 1e-3, "b_eps -> b");
  const hermite::DetSample s(2, 200000, derive_seed(kSeed, 91));
  double spread = 0.0;
  const double ref = s.f_coefficient(std::vector<unsigned>{2, 0, 0, 0}).value;
  for (unsigned p = 1; p < 4; ++p) {
    std::vector<unsigned> b(4, 0);
    b[p] = 2;
    const auto f = s.f_coefficient(b);
    spread = std::max(spread, std::fabs(f.value - ref) / f.error);
  }
  o.require(spread < 3, "f symmetry across positions");
  for (const auto& b : {std::vector<unsigned>{1, 0, 1, 0}, std::vector<unsigned>{1, 1, 0, 0}, std::vector<unsigned>{3, 0, 0, 0}}) {
    const auto f = s.f_coefficient(b);
    o.require(std::fabs(f.value) <= 3 * f.error + 1e-12, "odd-index vanishing");
  }
  for (unsigned m : {1u, 2u, 3u}) {
    const auto ft = hermite::f_tilde_22(m, 400000, derive_seed(kSeed, 95 + m));
    o.note("f~(m=" + std::to_string(m) + ")=" + f6(ft.display.value) + "+-" + f6(ft.display.error));
    o.require(ft.display.value > 5 * ft.display.error, "f~ > 0 at m=" + std::to_string(m));
  }
  o.note("orthogonality err " + f6(orth) + ", b_eps err " + f6(beps));
  return o;
}

Outcome counting_integrity() {
  Outcome o;
  int sturm_vs_eigen = 0;
  for (int i = 0; i < 1000; ++i) {
    const KssSystem p = sample_system(1, 20, derive_seed(kSeed + 1, i));
    const auto s = rootcount::count_univariate(p.equation(0));
    o.require(s.certified, "Sturm certified");
    if (s.count != oracle::companion_count(p.equation(0))) ++sturm_vs_eigen;
  }
  o.require(sturm_vs_eigen == 0, "Sturm vs eigenvalue oracle");
  int sub_vs_res = 0;
  for (int i = 0; i < 200; ++i) {
    const KssSystem p = sample_system(2, 2, derive_seed(kSeed + 2, i));
    const auto r = rootcount::count_real_roots(p);
    if (!r.certified || r.count != oracle::resultant_count_m2d2(p)) ++sub_vs_res;
  }
  o.require(sub_vs_res == 0, "subdivision vs resultant oracle");
  std::uint64_t total = 0, uncertified = 0, over = 0;
  for (const auto& [key, run] : runs) {
    const unsigned long long cap = static_cast<unsigned long long>(std::pow(key.second, key.first) + 0.5);
    for (const auto& r : run.records) {
      ++total;
      uncertified += r.certified ? 0 : 1;
      over += r.count > cap ? 1 : 0;
    }
  }
  o.require(total > 0 && over == 0, "counts <= d^m");
  o.require(uncertified == 0, "no uncertified counts");
  o.note("eigen disagreements " + std::to_string(sturm_vs_eigen) + "/1000, resultant disagreements " +
         std::to_string(sub_vs_res) + "/200, " + std::to_string(total) + " MC counts, " + std::to_string(uncertified) +
         " uncertified");
  return o;
}

Outcome determinism() {
  Outcome o;
  std::vector<std::string> outputs;
  for (unsigned w : {1u, 4u, 8u}) {
    ExperimentConfig c = ExperimentConfig::defaults(false);
    c.m = 1;
    c.d_list = {10, 40};
    c.n_samples = 300;
    c.master_seed = kSeed;
    c.workers = w;
    c.out_dir = (fs::temp_directory_path() / ("kssvar_accept_w" + std::to_string(w))).string();
    fs::remove_all(c.out_dir);
    engine::run_experiment(c);
    std::ifstream in(fs::path(c.out_dir) / "aggregate.json");
    std::stringstream ss;
    ss << in.rdbuf();
    outputs.push_back(ss.str());
    fs::remove_all(c.out_dir);
  }
  o.require(!outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2], "byte-identical aggregates");
  o.note(std::to_string(outputs[0].size()) + " bytes compared across 1, 4, 8 workers");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mean law", mean_law},
      {"dual-route variance", dual_route},
      {"convergence to the limit", convergence},
      {"positivity chain", positivity},
      {"kernel limits", kernel_limits},
      {"bound suite", bound_suite},
      {"G identities", g_identities},
      {"Hermite suite", hermite_suite},
      {"root counting integrity", counting_integrity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%zu] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
