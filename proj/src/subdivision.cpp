#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "kssvar/interval.hpp"
#include "kssvar/rootcount.hpp"

namespace kssvar::rootcount {

namespace {

struct Cell {
  unsigned face = 0;
  std::vector<double> lo, hi;  // box in the free coordinates of the face
};

template <class T>
bool invert_point(std::vector<T>& a, std::size_t n, std::vector<T>& inv) {
  inv.assign(n * n, T(0));
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = T(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    const T p = a[piv * n + col];
    if (!(std::fabs(p) > T(0)) || !std::isfinite(p)) return false;
    if (piv != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= p;
      inv[col * n + c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = a[r * n + col];
      if (f == T(0)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  for (const T& x : inv)
    if (!std::isfinite(x)) return false;
  return true;
}

// Interval evaluation of the homogenized system restricted to a face u_face = 1.
template <class T>
class FaceSystem {
 public:
  using I = Interval<T>;

  FaceSystem(const KssSystem& system, unsigned face) : m_(system.m()), d_(system.d()), face_(face) {
    const auto& terms = system.terms();
    exps_.reserve(terms.size() * (m_ + 1));
    for (const auto& j : terms) {
      unsigned deg = 0;
      for (unsigned k = 0; k < m_; ++k) deg += j[k];
      exps_.push_back(d_ - deg);
      for (unsigned k = 0; k < m_; ++k) exps_.push_back(j[k]);
    }
    coeffs_.assign(system.coefficients().begin(), system.coefficients().end());
    for (unsigned c = 0; c <= m_; ++c)
      if (c != face_) free_.push_back(c);
    pw_.resize((m_ + 1) * (d_ + 1));
  }

  [[nodiscard]] unsigned m() const { return m_; }
  [[nodiscard]] unsigned coordinate(unsigned k) const { return free_[k]; }

  // F over the box; J (row-major m x m, d F_l / d v_k) if requested.
  void eval(const std::vector<I>& box, std::vector<I>& f, std::vector<I>* jac) {
    const std::size_t stride = d_ + 1;
    for (unsigned e = 0; e <= d_; ++e) pw_[face_ * stride + e] = I(T(1));
    for (unsigned k = 0; k < m_; ++k) interval_powers(box[k], d_, pw_.data() + free_[k] * stride);
    f.assign(m_, I(T(0)));
    if (jac) jac->assign(m_ * m_, I(T(0)));
    const std::size_t nterms = exps_.size() / (m_ + 1);
    const std::size_t tc = nterms;
    for (std::size_t r = 0; r < nterms; ++r) {
      const unsigned* e = exps_.data() + r * (m_ + 1);
      I mono(T(1));
      for (unsigned c = 0; c <= m_; ++c)
        if (e[c] != 0) mono = mono * pw_[c * stride + e[c]];
      for (unsigned l = 0; l < m_; ++l) f[l] += coeffs_[l * tc + r] * mono;
      if (!jac) continue;
      for (unsigned k = 0; k < m_; ++k) {
        const unsigned ck = free_[k];
        if (e[ck] == 0) continue;
        I part(static_cast<T>(e[ck]));
        part = part * pw_[ck * stride + e[ck] - 1];
        for (unsigned c = 0; c <= m_; ++c)
          if (c != ck && e[c] != 0) part = part * pw_[c * stride + e[c]];
        for (unsigned l = 0; l < m_; ++l) (*jac)[l * m_ + k] += coeffs_[l * tc + r] * part;
      }
    }
  }

 private:
  unsigned m_, d_, face_;
  std::vector<unsigned> exps_;
  std::vector<T> coeffs_;
  std::vector<unsigned> free_;
  std::vector<I> pw_;
};

struct Found {
  unsigned face;
  std::vector<double> v;
};

template <class T>
struct Processor {
  using I = Interval<T>;
  std::vector<FaceSystem<T>> faces;
  double min_width;
  double inflation;
  std::size_t max_cells;
  std::size_t processed = 0;
  std::vector<Found> found;
  std::vector<Cell> unresolved;

  // Returns true if the cell is finished (excluded or root resolved), false to bisect.
  bool test(const Cell& cell) {
    FaceSystem<T>& fs = faces[cell.face];
    const unsigned m = fs.m();
    std::vector<I> box(m), f;
    for (unsigned k = 0; k < m; ++k) box[k] = I(static_cast<T>(cell.lo[k]), static_cast<T>(cell.hi[k]));
    fs.eval(box, f, nullptr);
    for (const I& x : f)
      if (!x.contains_zero()) return true;

    std::vector<T> c(m);
    std::vector<I> big(m), jac, fc, cbox(m);
    for (unsigned k = 0; k < m; ++k) {
      c[k] = box[k].mid();
      const T half = (box[k].hi - box[k].lo) / 2 * (T(1) + static_cast<T>(inflation));
      big[k] = I(c[k] - half, c[k] + half);
      cbox[k] = I(c[k]);
    }
    fs.eval(big, f, &jac);
    fs.eval(cbox, fc, nullptr);
    // Mean-value form on the original box.
    for (unsigned l = 0; l < m; ++l) {
      I mv = fc[l];
      for (unsigned k = 0; k < m; ++k) mv += jac[l * m + k] * (box[k] - I(c[k]));
      if (!mv.contains_zero()) return true;
    }

    std::vector<I> x = big;
    bool unique = false;
    for (int iter = 0; iter < 12; ++iter) {
      std::vector<T> mid(m * m), y;
      for (std::size_t i = 0; i < m * m; ++i) mid[i] = jac[i].mid();
      if (!invert_point(mid, m, y)) return false;
      std::vector<I> kx(m);
      for (unsigned i = 0; i < m; ++i) {
        I acc(c[i]);
        for (unsigned l = 0; l < m; ++l) acc -= y[i * m + l] * fc[l];
        for (unsigned j = 0; j < m; ++j) {
          I entry(T(i == j ? 1 : 0));
          for (unsigned l = 0; l < m; ++l) entry -= y[i * m + l] * jac[l * m + j];
          acc += entry * (x[j] - I(c[j]));
        }
        kx[i] = acc;
      }
      bool inside = true, disjoint = false;
      for (unsigned i = 0; i < m; ++i) {
        inside = inside && kx[i].inside_interior_of(x[i]);
        disjoint = disjoint || kx[i].disjoint_from(x[i]);
      }
      if (disjoint) {
        if (!unique) return true;
        break;
      }
      if (inside) unique = true;
      if (!unique) break;
      bool tight = true;
      for (unsigned i = 0; i < m; ++i) {
        x[i] = intersect(kx[i], x[i]);
        tight = tight && x[i].width() <= std::fabs(x[i].mid()) * T(1e-15) + T(1e-300);
      }
      if (tight) break;
      for (unsigned k = 0; k < m; ++k) {
        c[k] = x[k].mid();
        cbox[k] = I(c[k]);
      }
      fs.eval(x, f, &jac);
      fs.eval(cbox, fc, nullptr);
    }
    if (!unique) return false;

    // The unique root in the inflated box lies in x. Attribute it if x meets the cell.
    for (unsigned k = 0; k < m; ++k) {
      const double slack = 1e-10 * (cell.hi[k] - cell.lo[k]);
      if (static_cast<double>(x[k].hi) < cell.lo[k] - slack || static_cast<double>(x[k].lo) > cell.hi[k] + slack)
        return true;
    }
    Found r{cell.face, std::vector<double>(m)};
    for (unsigned k = 0; k < m; ++k) r.v[k] = static_cast<double>(x[k].mid());
    found.push_back(std::move(r));
    return true;
  }

  void run(std::vector<Cell> stack) {
    std::reverse(stack.begin(), stack.end());
    while (!stack.empty()) {
      Cell cell = std::move(stack.back());
      stack.pop_back();
      if (++processed > max_cells) {
        unresolved.push_back(std::move(cell));
        continue;
      }
      if (test(cell)) continue;
      double w = 0;
      for (std::size_t k = 0; k < cell.lo.size(); ++k) w = std::max(w, cell.hi[k] - cell.lo[k]);
      if (w < min_width) {
        unresolved.push_back(std::move(cell));
        continue;
      }
      const std::size_t m = cell.lo.size();
      const std::size_t n_children = std::size_t{1} << m;
      for (std::size_t mask = n_children; mask-- > 0;) {
        Cell child{cell.face, cell.lo, cell.hi};
        for (std::size_t k = 0; k < m; ++k) {
          const double mid = 0.5 * (cell.lo[k] + cell.hi[k]);
          if (mask & (std::size_t{1} << k))
            child.lo[k] = mid;
          else
            child.hi[k] = mid;
        }
        stack.push_back(std::move(child));
      }
    }
  }
};

template <class T>
Processor<T> make_processor(const KssSystem& system, double min_width, double inflation, std::size_t max_cells) {
  Processor<T> p;
  for (unsigned face = 0; face <= system.m(); ++face) p.faces.emplace_back(system, face);
  p.min_width = min_width;
  p.inflation = inflation;
  p.max_cells = max_cells;
  return p;
}

std::vector<double> to_sphere(unsigned face, const std::vector<double>& v, unsigned m) {
  std::vector<double> u(m + 1);
  u[face] = 1.0;
  unsigned k = 0;
  for (unsigned c = 0; c <= m; ++c)
    if (c != face) u[c] = v[k++];
  double n = 0;
  for (double x : u) n += x * x;
  n = std::sqrt(n);
  for (double& x : u) x /= n;
  // one representative per line
  std::size_t lead = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0.0) {
      lead = i;
      break;
    }
  if (u[0] < 0.0 || (u[0] == 0.0 && u[lead] < 0.0))
    for (double& x : u) x = -x;
  return u;
}

double line_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double dp = 0, dm = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dp += (a[i] - b[i]) * (a[i] - b[i]);
    dm += (a[i] + b[i]) * (a[i] + b[i]);
  }
  return std::sqrt(std::min(dp, dm));
}

}  // namespace

namespace {

// Univariate path (m = 1). Each face polynomial is expanded in Taylor form at the cell
// center with a rigorous floating-point error bound, which is much sharper than naive
// interval evaluation at large degree.
template <class T>
class TaylorCells {
 public:
  TaylorCells(std::vector<T> coeffs, double min_width) : a_(std::move(coeffs)), min_width_(min_width) {
    const T u = std::numeric_limits<T>::epsilon() / 2;
    const T n = static_cast<T>(2 * a_.size() + 4);
    gamma_ = n * u / (1 - n * u);
    b_.resize(a_.size());
    mag_.resize(a_.size());
  }

  struct Out {
    std::vector<std::pair<double, double>> roots;  // isolating intervals
    std::vector<std::pair<double, double>> unresolved;
  };

  void run(double lo, double hi, Out& out, unsigned pieces = 1) {
    std::vector<std::pair<double, double>> stack;
    for (unsigned i = pieces; i-- > 0;)
      stack.emplace_back(lo + (hi - lo) * i / pieces, i + 1 == pieces ? hi : lo + (hi - lo) * (i + 1) / pieces);
    while (!stack.empty()) {
      auto [l, h] = stack.back();
      stack.pop_back();
      const int verdict = classify(l, h);
      if (verdict == 0) continue;
      if (verdict == 1) {
        out.roots.emplace_back(l, h);
        continue;
      }
      if (h - l < min_width_) {
        out.unresolved.emplace_back(l, h);
        continue;
      }
      const double mid = 0.5 * (l + h);
      stack.emplace_back(mid, h);
      stack.emplace_back(l, mid);
    }
  }

  // Certified sign of p at x: -1, 0 (undecided), +1. Horner with a running error bound.
  int sign_at(double x) {
    const T tx = static_cast<T>(x);
    const T ax = std::fabs(tx);
    T s = 0, mag = 0;
    for (std::size_t i = a_.size(); i-- > 0;) {
      s = s * tx + a_[i];
      mag = mag * ax + std::fabs(a_[i]);
    }
    const T err = gamma_ * mag * (1 + gamma_);
    if (s > err) return 1;
    if (s < -err) return -1;
    return 0;
  }

 private:
  // Taylor coefficients b_k = p^(k)(c)/k! for k <= order_, with err_[k] bounding
  // |computed - exact|. mag_[k] are the Taylor coefficients of sum |a_j| x^j at |c|,
  // which dominate |b_k|.
  void expand(T c) {
    const std::size_t n = a_.size();
    std::copy(a_.begin(), a_.end(), b_.begin());
    for (std::size_t i = 0; i < n; ++i) mag_[i] = std::fabs(a_[i]);
    const T ac = std::fabs(c);
    const std::size_t passes = std::min(order_ + 1, n - 1);
    for (std::size_t k = 0; k < passes; ++k)
      for (std::size_t j = n - 1; j-- > k;) {
        b_[j] += c * b_[j + 1];
        mag_[j] += ac * mag_[j + 1];
      }
    err_.resize(n);
    for (std::size_t k = 0; k < n; ++k) err_[k] = gamma_ * mag_[k] * (1 + gamma_);
  }

  // 0: no root; 1: exactly one simple root; -1: undecided.
  int classify(double l, double h) {
    const T c = static_cast<T>(0.5 * (l + h));
    const T r = std::max(static_cast<T>(h) - c, c - static_cast<T>(l)) * (1 + 4 * std::numeric_limits<T>::epsilon());
    expand(c);
    const std::size_t n = a_.size();
    const std::size_t kmax = std::min(order_, n - 1);
    T head = 0, dhead = 0, part = 0, dpart = 0, rk = 1;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const T rk1 = rk;
      rk *= r;
      head += (std::fabs(b_[k]) + err_[k]) * rk;
      part += mag_[k] * rk;
      dpart += static_cast<T>(k) * mag_[k] * rk1;
      if (k >= 2) dhead += static_cast<T>(k) * (std::fabs(b_[k]) + err_[k]) * rk1;
    }
    // Remainder beyond kmax: P(|c| + r) - sum_{k<=kmax} mag_k r^k, and likewise for P'.
    T tail = 0, dtail = 0;
    if (kmax + 1 < n) {
      const T x = std::fabs(c) + r;
      T pv = 0, dv = 0;
      for (std::size_t i = n; i-- > 0;) {
        dv = dv * x + pv;
        pv = pv * x + std::fabs(a_[i]);
      }
      tail = std::max(T(0), pv * (1 + gamma_) - (mag_[0] + part) * (1 - gamma_));
      dtail = std::max(T(0), dv * (1 + gamma_) - (mag_[1] + dpart) * (1 - gamma_));
    }
    const T slack = 1 + 4 * gamma_;
    if (std::fabs(b_[0]) - err_[0] > (head + tail) * slack) return 0;
    if (n < 2 || !(std::fabs(b_[1]) - err_[1] > (dhead + dtail) * slack)) return -1;
    // p is strictly monotone on the cell: one root iff the endpoint signs differ.
    const int sl = sign_at(l);
    const int sh = sign_at(h);
    if (sl == 0 || sh == 0) return -1;
    return sl != sh ? 1 : 0;
  }

  static constexpr std::size_t order_ = 24;
  std::vector<T> a_, b_, mag_, err_;
  T gamma_;
  double min_width_;
};

double refine_root(std::span<const double> a, double lo, double hi) {
  auto eval = [&](double x) {
    double s = 0;
    for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
    return s;
  };
  double fl = eval(lo);
  for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fl < 0)) {
      lo = mid;
      fl = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <class T>
std::vector<T> cast_coeffs(const std::vector<double>& a) {
  return std::vector<T>(a.begin(), a.end());
}

SphereRoots sphere_roots_univariate(const KssSystem& system, const SubdivisionOptions& options) {
  const unsigned d = system.d();
  SphereRoots out;
  auto& res = out.result;
  res.method = Method::sphere_subdivision;
  res.bezout_cap = d;
  std::size_t unresolved = 0;
  // face 0: u = (1, v), p(v) = sum a_j v^j;  face 1: u = (v, 1), p(v) = sum a_j v^(d-j)
  for (unsigned face = 0; face < 2; ++face) {
    std::vector<double> a(system.equation(0).begin(), system.equation(0).end());
    if (face == 1) std::reverse(a.begin(), a.end());
    TaylorCells<double> cells(a, options.min_width);
    TaylorCells<double>::Out found;
    // Start near the typical exclusion width, about 1/(8 sqrt(d)) in each half.
    const unsigned pieces = std::bit_ceil(static_cast<unsigned>(std::ceil(8.0 * std::sqrt(static_cast<double>(d)))));
    cells.run(-1.0, 1.0, found, pieces);
    if (!found.unresolved.empty() && options.escalate) {
      res.method = Method::sphere_subdivision_extended;
      TaylorCells<long double> ext(cast_coeffs<long double>(a), options.min_width / 64);
      TaylorCells<long double>::Out more;
      for (auto [l, h] : found.unresolved) ext.run(l, h, more);
      found.roots.insert(found.roots.end(), more.roots.begin(), more.roots.end());
      found.unresolved = std::move(more.unresolved);
    }
    unresolved += found.unresolved.size();
    for (auto [l, h] : found.roots) {
      const double v = refine_root(a, l, h);
      std::vector<double> u = face == 0 ? std::vector<double>{1.0, v} : std::vector<double>{v, 1.0};
      const double nrm = std::hypot(u[0], u[1]);
      u[0] /= nrm;
      u[1] /= nrm;
      if (u[0] < 0 || (u[0] == 0 && u[1] < 0)) {
        u[0] = -u[0];
        u[1] = -u[1];
      }
      if (face == 1 && l <= 0.0 && 0.0 <= h && std::fabs(u[0]) < 1e-12) {
        res.equator_root = true;
      } else {
        ++res.count;
      }
      out.roots.push_back(std::move(u));
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  res.unresolved_regions = static_cast<unsigned>(unresolved);
  res.certified = unresolved == 0 && res.count <= res.bezout_cap;
  return out;
}

}  // namespace

SphereRoots sphere_roots(const KssSystem& system, const SubdivisionOptions& options) {
  if (system.m() == 1) return sphere_roots_univariate(system, options);
  const unsigned m = system.m();
  const unsigned d = system.d();
  const unsigned n0 = std::max(2u, static_cast<unsigned>(std::ceil(std::sqrt(static_cast<double>(d)))));

  std::vector<Cell> initial;
  for (unsigned face = 0; face <= m; ++face) {
    std::vector<unsigned> idx(m, 0);
    while (true) {
      Cell c{face, std::vector<double>(m), std::vector<double>(m)};
      for (unsigned k = 0; k < m; ++k) {
        c.lo[k] = -1.0 + 2.0 * idx[k] / n0;
        c.hi[k] = idx[k] + 1 == n0 ? 1.0 : -1.0 + 2.0 * (idx[k] + 1) / n0;
      }
      initial.push_back(std::move(c));
      unsigned k = 0;
      while (k < m && ++idx[k] == n0) idx[k++] = 0;
      if (k == m) break;
    }
  }

  auto proc = make_processor<double>(system, options.min_width, options.inflation, options.max_cells);
  proc.run(std::move(initial));
  std::vector<Found> found = std::move(proc.found);
  std::vector<Cell> unresolved = std::move(proc.unresolved);
  bool extended = false;
  if (!unresolved.empty() && options.escalate) {
    extended = true;
    auto ext = make_processor<long double>(system, options.min_width / 64, options.inflation, options.max_cells);
    ext.run(std::move(unresolved));
    found.insert(found.end(), ext.found.begin(), ext.found.end());
    unresolved = std::move(ext.unresolved);
  }

  SphereRoots out;
  for (const auto& f : found) {
    auto p = to_sphere(f.face, f.v, m);
    bool dup = false;
    for (const auto& q : out.roots)
      if (line_distance(p, q) < 1e-8) {
        dup = true;
        break;
      }
    if (!dup) out.roots.push_back(std::move(p));
  }
  std::sort(out.roots.begin(), out.roots.end());

  auto& r = out.result;
  r.method = extended ? Method::sphere_subdivision_extended : Method::sphere_subdivision;
  r.bezout_cap = 1;
  for (unsigned k = 0; k < m; ++k) r.bezout_cap *= d;
  r.unresolved_regions = static_cast<unsigned>(unresolved.size());
  r.certified = unresolved.empty();
  for (const auto& p : out.roots) {
    if (std::fabs(p[0]) < 1e-12)
      r.equator_root = true;
    else
      ++r.count;
  }
  if (r.count > r.bezout_cap) r.certified = false;
  return out;
}

RootCountResult count_system(const KssSystem& system, const SubdivisionOptions& options) {
  return sphere_roots(system, options).result;
}

}  // namespace kssvar::rootcount
