#include "kssvar/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "kssvar/rng.hpp"

namespace kssvar {

namespace {

void require_homogeneous(const KssSystem& system, const char* what) {
  if (system.form() != Form::homogeneous)
    throw std::invalid_argument(std::string(what) + ": requires the homogeneous form");
}

// pw[k * (d + 1) + e] = u_k^e
std::vector<double> power_table(std::span<const double> u, unsigned d) {
  std::vector<double> pw(u.size() * (d + 1));
  for (std::size_t k = 0; k < u.size(); ++k) {
    double* row = pw.data() + k * (d + 1);
    row[0] = 1.0;
    for (unsigned e = 1; e <= d; ++e) row[e] = row[e - 1] * u[k];
  }
  return pw;
}

double compensated_horner(std::span<const double> a, double x) {
  double s = a.back();
  double c = 0.0;
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    const double p = s * x;
    const double pi = std::fma(s, x, -p);
    const double t = p + a[i];
    const double z = t - p;
    const double sigma = (p - (t - z)) + (a[i] - z);
    s = t;
    c = c * x + (pi + sigma);
  }
  return s + c;
}

}  // namespace

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("SpherePoint: need at least 2 coordinates");
  const double n = norm(coords_);
  if (!(std::fabs(n - 1.0) <= 1e-12))
    throw std::invalid_argument("SpherePoint: norm " + std::to_string(n) + " is not 1");
}

SpherePoint SpherePoint::normalized(std::vector<double> v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("SpherePoint: cannot normalize");
  for (double& x : v) x /= n;
  return SpherePoint(std::move(v));
}

KssSystem::KssSystem(unsigned m, unsigned d, Form form, std::uint64_t seed, std::vector<double> coefficients)
    : m_(m), d_(d), form_(form), seed_(seed), coefficients_(std::move(coefficients)) {
  if (m == 0) throw std::invalid_argument("KssSystem: m must be >= 1");
  if (d == 0) throw std::invalid_argument("KssSystem: d must be >= 1");
  terms_ = std::make_shared<const std::vector<std::vector<unsigned>>>(graded_lex_indices(m, d));
  if (coefficients_.size() != m * terms_->size())
    throw std::invalid_argument("KssSystem: expected " + std::to_string(m * terms_->size()) +
                                " coefficients, got " + std::to_string(coefficients_.size()));
}

MultiIndex KssSystem::index(std::size_t rank) const {
  MultiIndex affine((*terms_).at(rank), d_, Form::affine);
  return form_ == Form::affine ? affine : affine.homogenized();
}

KssSystem sample_system(unsigned m, unsigned d, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("sample_system: m must be >= 1");
  if (d <= 1) throw std::invalid_argument("sample_system: d must be > 1");
  const auto terms = graded_lex_indices(m, d);
  std::vector<double> coeffs(m * terms.size());
  for (unsigned l = 0; l < m; ++l)
    for (std::size_t r = 0; r < terms.size(); ++r)
      coeffs[l * terms.size() + r] = std::sqrt(multinomial_weight(terms[r], d)) * keyed_normal(seed, l, r);
  return {m, d, Form::affine, seed, std::move(coeffs)};
}

KssSystem homogenize(const KssSystem& system) {
  return {system.m(), system.d(), Form::homogeneous, system.seed(),
          {system.coefficients().begin(), system.coefficients().end()}};
}

std::vector<double> eval_affine(const KssSystem& system, std::span<const double> t) {
  if (system.form() != Form::affine) throw std::invalid_argument("eval_affine: requires the affine form");
  if (t.size() != system.m()) throw std::invalid_argument("eval_affine: point dimension mismatch");
  const unsigned m = system.m();
  const unsigned d = system.d();
  std::vector<double> out(m, 0.0);
  if (m == 1) {
    out[0] = compensated_horner(system.equation(0), t[0]);
    return out;
  }
  const auto pw = power_table(t, d);
  const auto& terms = system.terms();
  for (std::size_t r = 0; r < terms.size(); ++r) {
    double mono = 1.0;
    for (unsigned k = 0; k < m; ++k) mono *= pw[k * (d + 1) + terms[r][k]];
    for (unsigned l = 0; l < m; ++l) out[l] += system.coefficient(l, r) * mono;
  }
  return out;
}

std::vector<double> eval_homogeneous(const KssSystem& system, std::span<const double> u) {
  require_homogeneous(system, "eval_homogeneous");
  const unsigned m = system.m();
  const unsigned d = system.d();
  if (u.size() != m + 1) throw std::invalid_argument("eval_homogeneous: point dimension mismatch");
  const auto pw = power_table(u, d);
  const auto& terms = system.terms();
  std::vector<double> out(m, 0.0);
  for (std::size_t r = 0; r < terms.size(); ++r) {
    unsigned deg = 0;
    double mono = 1.0;
    for (unsigned k = 0; k < m; ++k) {
      mono *= pw[(k + 1) * (d + 1) + terms[r][k]];
      deg += terms[r][k];
    }
    mono *= pw[d - deg];
    for (unsigned l = 0; l < m; ++l) out[l] += system.coefficient(l, r) * mono;
  }
  return out;
}

std::vector<double> eval_system(const KssSystem& system, const SpherePoint& point) {
  require_homogeneous(system, "eval_system");
  return eval_homogeneous(system, point.coords());
}

Matrix free_gradient(const KssSystem& system, std::span<const double> u) {
  require_homogeneous(system, "free_gradient");
  const unsigned m = system.m();
  const unsigned d = system.d();
  if (u.size() != m + 1) throw std::invalid_argument("free_gradient: point dimension mismatch");
  const auto pw = power_table(u, d);
  const auto& terms = system.terms();
  Matrix g(m, m + 1);
  std::vector<unsigned> e(m + 1);
  for (std::size_t r = 0; r < terms.size(); ++r) {
    unsigned deg = 0;
    for (unsigned k = 0; k < m; ++k) {
      e[k + 1] = terms[r][k];
      deg += terms[r][k];
    }
    e[0] = d - deg;
    for (unsigned i = 0; i <= m; ++i) {
      if (e[i] == 0) continue;
      double mono = static_cast<double>(e[i]) * pw[i * (d + 1) + e[i] - 1];
      for (unsigned k = 0; k <= m; ++k)
        if (k != i) mono *= pw[k * (d + 1) + e[k]];
      for (unsigned l = 0; l < m; ++l) g(l, i) += system.coefficient(l, r) * mono;
    }
  }
  return g;
}

Matrix projected_gradient(const KssSystem& system, const SpherePoint& point) {
  Matrix g = free_gradient(system, point.coords());
  const auto& t = point.coords();
  for (std::size_t l = 0; l < g.rows(); ++l) {
    const double radial = dot(g.row(l), t);
    for (std::size_t i = 0; i < g.cols(); ++i) g(l, i) -= radial * t[i];
  }
  return g;
}

Matrix spherical_gradient(const KssSystem& system, const SpherePoint& point,
                          const std::vector<std::vector<double>>& basis, bool scaled) {
  const unsigned m = system.m();
  if (basis.size() != m) throw std::invalid_argument("spherical_gradient: need m tangent vectors");
  for (const auto& v : basis)
    if (v.size() != m + 1 || std::fabs(dot(v, point.coords())) > 1e-10)
      throw std::invalid_argument("spherical_gradient: basis vector is not tangent at the point");
  const Matrix g = free_gradient(system, point.coords());
  const double scale = scaled ? 1.0 / std::sqrt(static_cast<double>(system.d())) : 1.0;
  Matrix out(m, m);
  for (unsigned l = 0; l < m; ++l)
    for (unsigned k = 0; k < m; ++k) out(l, k) = dot(g.row(l), basis[k]) * scale;
  return out;
}

std::vector<std::vector<double>> tangent_basis(const SpherePoint& point) {
  const auto& t = point.coords();
  const std::size_t n = t.size();
  // Householder reflection sending e0 to +-t; its other columns span t-perp.
  std::vector<double> w(t);
  const double sign = t[0] > 0.0 ? 1.0 : -1.0;
  for (double& x : w) x *= sign;
  w[0] += 1.0;
  const double ww = dot(w, w);
  std::vector<std::vector<double>> basis;
  basis.reserve(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> col(n, 0.0);
    col[k] = 1.0;
    const double f = 2.0 * w[k] / ww;
    for (std::size_t i = 0; i < n; ++i) col[i] -= f * w[i];
    basis.push_back(std::move(col));
  }
  return basis;
}

PairFrames canonical_pair_frames(const SpherePoint& s, const SpherePoint& t) {
  const std::size_t n = s.dimension();
  if (t.dimension() != n) throw std::invalid_argument("canonical_pair_frames: dimension mismatch");
  const auto& e0 = s.coords();
  const double c = dot(e0, t.coords());
  std::vector<double> e1(t.coords());
  for (std::size_t i = 0; i < n; ++i) e1[i] -= c * e0[i];
  double sn = norm(e1);
  if (sn < 1e-14) {
    e1 = tangent_basis(s).front();
    sn = 0.0;
  } else {
    for (double& x : e1) x /= sn;
  }
  PairFrames f;
  f.psi = std::atan2(sn, c);

  std::vector<std::vector<double>> frame{e0, e1};
  for (std::size_t cand = 0; cand < n && frame.size() < n; ++cand) {
    std::vector<double> v(n, 0.0);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : frame) {
        const double p = dot(v, q);
        for (std::size_t i = 0; i < n; ++i) v[i] -= p * q[i];
      }
    const double vn = norm(v);
    if (vn < 1e-8) continue;
    for (double& x : v) x /= vn;
    frame.push_back(std::move(v));
  }

  const double cp = std::cos(f.psi);
  const double sp = std::sin(f.psi);
  f.at_s.assign(frame.begin() + 1, frame.end());
  f.at_t = f.at_s;
  for (std::size_t i = 0; i < n; ++i) f.at_t[0][i] = cp * e1[i] - sp * e0[i];
  return f;
}

double covariance(const SpherePoint& s, const SpherePoint& t, unsigned d) {
  if (s.dimension() != t.dimension()) throw std::invalid_argument("covariance: dimension mismatch");
  return std::pow(dot(s.coords(), t.coords()), static_cast<double>(d));
}

std::string to_json(const KssSystem& system) {
  nlohmann::json j;
  j["m"] = system.m();
  j["d"] = system.d();
  j["form"] = system.form() == Form::affine ? "affine" : "homogeneous";
  j["seed"] = system.seed();
  j["coefficients"] = std::vector<double>(system.coefficients().begin(), system.coefficients().end());
  return j.dump();
}

KssSystem system_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string form = j.at("form").get<std::string>();
  if (form != "affine" && form != "homogeneous") throw std::invalid_argument("system_from_json: bad form " + form);
  return {j.at("m").get<unsigned>(), j.at("d").get<unsigned>(), form == "affine" ? Form::affine : Form::homogeneous,
          j.at("seed").get<std::uint64_t>(), j.at("coefficients").get<std::vector<double>>()};
}

}  // namespace kssvar
