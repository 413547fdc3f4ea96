#pragma once

// Truncated Taylor arithmetic (forward-mode differentiation to fixed degree).
//
// A Taylor<N> holds the normalized coefficients c[k] = f^(k)(x0) / k! of a
// function around an expansion point, k = 0..N. Arithmetic and elementary
// functions propagate them with the usual recurrences, so evaluating an
// expression on Taylor<N>::variable(x0) yields all derivatives to order N.

#include <array>
#include <cmath>
#include <cstddef>

#include "uniwkb/error.hpp"

namespace uniwkb {

template <int N>
class Taylor {
  static_assert(N >= 0, "degree must be non-negative");

public:
  static constexpr int degree = N;

  constexpr Taylor() = default;
  constexpr Taylor(double c) { c_[0] = c; }  // NOLINT: constants promote implicitly

  static Taylor constant(double c) { return Taylor(c); }

  static Taylor variable(double x0) {
    Taylor t(x0);
    if constexpr (N >= 1) t.c_[1] = 1.0;
    return t;
  }

  /// Builds a jet from derivative values f, f', f'', ... (at most N+1 used).
  template <std::size_t M>
  static Taylor from_derivatives(const std::array<double, M>& d) {
    Taylor t;
    double fact = 1.0;
    for (int k = 0; k <= N && k < static_cast<int>(M); ++k) {
      if (k > 0) fact *= k;
      t.c_[k] = d[k] / fact;
    }
    return t;
  }

  double value() const { return c_[0]; }
  double coeff(int k) const { return c_[k]; }
  double& coeff(int k) { return c_[k]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact;
  }

  Taylor operator-() const {
    Taylor r;
    for (int k = 0; k <= N; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Taylor& operator+=(const Taylor& o) {
    for (int k = 0; k <= N; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int k = 0; k <= N; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= N; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
      r.c_[k] = s;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    if (b.c_[0] == 0.0) throw DomainError("division by zero");
    Taylor r;
    for (int k = 0; k <= N; ++k) {
      double s = a.c_[k];
      for (int i = 1; i <= k; ++i) s -= b.c_[i] * r.c_[k - i];
      r.c_[k] = s / b.c_[0];
    }
    return r;
  }

  friend Taylor exp(const Taylor& a) {
    Taylor r;
    r.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k <= N; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / k;
    }
    return r;
  }

  friend Taylor log(const Taylor& a) {
    if (!(a.c_[0] > 0.0)) throw DomainError("log of non-positive value");
    Taylor r;
    r.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k <= N; ++k) {
      double s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= j * r.c_[j] * a.c_[k - j] / k;
      r.c_[k] = s / a.c_[0];
    }
    return r;
  }

  /// Real power with a constant exponent; base must be positive unless the
  /// exponent is a small integer.
  friend Taylor pow(const Taylor& a, double p) {
    if (p == std::round(p) && std::abs(p) <= 64.0) return ipow(a, static_cast<int>(p));
    if (!(a.c_[0] > 0.0)) throw DomainError("non-integer power of non-positive value");
    Taylor r;
    r.c_[0] = std::pow(a.c_[0], p);
    for (int k = 1; k <= N; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / (k * a.c_[0]);
    }
    return r;
  }

  friend Taylor pow(const Taylor& a, const Taylor& b) {
    bool constant_exponent = true;
    for (int k = 1; k <= N; ++k) constant_exponent = constant_exponent && b.c_[k] == 0.0;
    if (constant_exponent) return pow(a, b.c_[0]);
    return exp(b * log(a));
  }

  friend Taylor ipow(const Taylor& a, int n) {
    if (n < 0) return Taylor(1.0) / ipow(a, -n);
    Taylor r(1.0);
    Taylor base = a;
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return r;
  }

  friend Taylor sqrt(const Taylor& a) {
    if (!(a.c_[0] > 0.0)) throw DomainError("sqrt of non-positive value");
    Taylor r;
    r.c_[0] = std::sqrt(a.c_[0]);
    for (int k = 1; k <= N; ++k) {
      double s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
      r.c_[k] = s / (2.0 * r.c_[0]);
    }
    return r;
  }

  friend void sincos(const Taylor& a, Taylor& s, Taylor& c) {
    s.c_[0] = std::sin(a.c_[0]);
    c.c_[0] = std::cos(a.c_[0]);
    for (int k = 1; k <= N; ++k) {
      double ss = 0.0, cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * c.c_[k - j];
        cc -= j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / k;
      c.c_[k] = cc / k;
    }
  }

  friend void sinhcosh(const Taylor& a, Taylor& s, Taylor& c) {
    s.c_[0] = std::sinh(a.c_[0]);
    c.c_[0] = std::cosh(a.c_[0]);
    for (int k = 1; k <= N; ++k) {
      double ss = 0.0, cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * c.c_[k - j];
        cc += j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / k;
      c.c_[k] = cc / k;
    }
  }

  friend Taylor sin(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return s;
  }
  friend Taylor cos(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return c;
  }
  friend Taylor tan(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return s / c;
  }
  friend Taylor sinh(const Taylor& a) {
    Taylor s, c;
    sinhcosh(a, s, c);
    return s;
  }
  friend Taylor cosh(const Taylor& a) {
    Taylor s, c;
    sinhcosh(a, s, c);
    return c;
  }
  friend Taylor tanh(const Taylor& a) {
    Taylor s, c;
    sinhcosh(a, s, c);
    return s / c;
  }

  friend Taylor abs(const Taylor& a) { return a.c_[0] < 0.0 ? -a : a; }

private:
  std::array<double, N + 1> c_{};
};

/// Uniform access to the value of a plain double or a jet.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Taylor<N>& x) { return x.value(); }

}  // namespace uniwkb
