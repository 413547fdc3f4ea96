#pragma once

// Unevaluated sum of two doubles (~32 significant digits). Used by the Airy
// kernel where closed forms cancel badly in plain double precision.

#include <cmath>

namespace uniwkb::detail {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT: implicit by intent
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  constexpr double value() const { return hi + lo; }
};

using DD = DoubleDouble;

namespace dd_impl {

inline DD fast_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_impl

inline DD operator-(const DD& a) { return {-a.hi, -a.lo}; }

inline DD operator+(const DD& a, const DD& b) {
  DD s = dd_impl::two_sum(a.hi, b.hi);
  DD t = dd_impl::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_impl::fast_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_impl::fast_two_sum(s.hi, s.lo);
}

inline DD operator+(const DD& a, double b) {
  DD s = dd_impl::two_sum(a.hi, b);
  s.lo += a.lo;
  return dd_impl::fast_two_sum(s.hi, s.lo);
}

inline DD operator+(double a, const DD& b) { return b + a; }
inline DD operator-(const DD& a, const DD& b) { return a + (-b); }
inline DD operator-(const DD& a, double b) { return a + (-b); }
inline DD operator-(double a, const DD& b) { return (-b) + a; }

inline DD operator*(const DD& a, const DD& b) {
  DD p = dd_impl::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_impl::fast_two_sum(p.hi, p.lo);
}

inline DD operator*(const DD& a, double b) {
  DD p = dd_impl::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return dd_impl::fast_two_sum(p.hi, p.lo);
}

inline DD operator*(double a, const DD& b) { return b * a; }

inline DD operator/(const DD& a, const DD& b) {
  const double q1 = a.hi / b.hi;
  DD r = a - b * q1;
  const double q2 = r.hi / b.hi;
  r = r - b * q2;
  const double q3 = r.hi / b.hi;
  return DD(dd_impl::fast_two_sum(q1, q2)) + q3;
}

inline DD operator/(const DD& a, double b) { return a / DD(b); }
inline DD operator/(double a, const DD& b) { return DD(a) / b; }

inline DD& operator+=(DD& a, const DD& b) { return a = a + b; }
inline DD& operator-=(DD& a, const DD& b) { return a = a - b; }
inline DD& operator*=(DD& a, const DD& b) { return a = a * b; }
inline DD& operator/=(DD& a, const DD& b) { return a = a / b; }

inline DD sqrt(const DD& a) {
  if (a.hi <= 0.0) return DD(0.0);
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  // one Newton step on the double estimate
  const DD diff = a - dd_impl::two_prod(ax, ax);
  return dd_impl::two_sum(ax, diff.hi * (x * 0.5));
}

inline DD abs(const DD& a) { return a.hi < 0.0 ? -a : a; }

inline bool operator<(const DD& a, const DD& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DD& a, const DD& b) { return b < a; }

namespace dd_const {
inline constexpr DD pi{3.141592653589793, 1.2246467991473532e-16};
inline constexpr DD inv_pi{0.3183098861837907, -1.9678676675182486e-17};
inline constexpr DD sqrt3{1.7320508075688772, 1.0035084221806903e-16};
// Ai(0) and -Ai'(0)
inline constexpr DD ai0{0.3550280538878172, 2.05233632436212e-17};
inline constexpr DD neg_dai0{0.2588194037928068, -2.522243111610832e-17};
}  // namespace dd_const

}  // namespace uniwkb::detail
