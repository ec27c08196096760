#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace kssvar {

/// Closed interval with outward rounding: every operation computes the round-to-nearest
/// result and widens each endpoint by at least one ulp, which encloses the exact result.
template <class T>
struct Interval {
  T lo{};
  T hi{};

  constexpr Interval() = default;
  constexpr Interval(T point) : lo(point), hi(point) {}  // NOLINT(google-explicit-constructor)
  constexpr Interval(T l, T h) : lo(l), hi(h) {}

  // |x| * eps is at least one ulp of x and is computed exactly (power-of-two scaling);
  // denorm_min covers x = 0. Cheaper than nextafter.
  static T up(T x) {
    return x + (std::fabs(x) * std::numeric_limits<T>::epsilon() + std::numeric_limits<T>::denorm_min());
  }
  static T down(T x) {
    return x - (std::fabs(x) * std::numeric_limits<T>::epsilon() + std::numeric_limits<T>::denorm_min());
  }

  [[nodiscard]] T mid() const { return lo + (hi - lo) / 2; }
  [[nodiscard]] T width() const { return hi - lo; }
  [[nodiscard]] bool contains(T x) const { return lo <= x && x <= hi; }
  [[nodiscard]] bool contains_zero() const { return lo <= T(0) && T(0) <= hi; }
  [[nodiscard]] T mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }

  /// True if this interval lies strictly inside `outer`.
  [[nodiscard]] bool inside_interior_of(const Interval& outer) const { return outer.lo < lo && hi < outer.hi; }
  [[nodiscard]] bool disjoint_from(const Interval& o) const { return hi < o.lo || o.hi < lo; }

  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }

  friend Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
  friend Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
  friend Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const T p1 = a.lo * b.lo;
    const T p2 = a.lo * b.hi;
    const T p3 = a.hi * b.lo;
    const T p4 = a.hi * b.hi;
    return {down(std::min(std::min(p1, p2), std::min(p3, p4))), up(std::max(std::max(p1, p2), std::max(p3, p4)))};
  }
  friend Interval operator*(T s, const Interval& a) {
    return s >= T(0) ? Interval{down(s * a.lo), up(s * a.hi)} : Interval{down(s * a.hi), up(s * a.lo)};
  }
};

template <class T>
Interval<T> intersect(const Interval<T>& a, const Interval<T>& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

/// Sharp enclosures of x^0 .. x^n, written to out[0..n].
template <class T>
void interval_powers(const Interval<T>& x, unsigned n, Interval<T>* out) {
  using I = Interval<T>;
  out[0] = I(T(1));
  if (x.lo >= T(0)) {
    for (unsigned e = 1; e <= n; ++e) out[e] = {I::down(out[e - 1].lo * x.lo), I::up(out[e - 1].hi * x.hi)};
    return;
  }
  if (x.hi <= T(0)) {
    T lo = 1, hi = 1;  // powers of |x| in [-x.hi, -x.lo]
    for (unsigned e = 1; e <= n; ++e) {
      lo = I::down(lo * -x.hi);
      hi = I::up(hi * -x.lo);
      out[e] = (e % 2 == 0) ? I{lo, hi} : I{-hi, -lo};
    }
    return;
  }
  T a = 1, b = 1;  // upper bounds of |lo|^e and hi^e
  for (unsigned e = 1; e <= n; ++e) {
    a = I::up(a * -x.lo);
    b = I::up(b * x.hi);
    out[e] = (e % 2 == 0) ? I{T(0), std::max(a, b)} : I{-a, b};
  }
}

}  // namespace kssvar
