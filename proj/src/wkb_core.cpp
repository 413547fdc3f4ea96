#include "uniwkb/wkb_core.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <type_traits>

#include "uniwkb/airy.hpp"
#include "uniwkb/error.hpp"

namespace uniwkb::wkb {

using detail::DD;

namespace {

// i^k as (re, im) for any integer k.
std::array<double, 2> i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

bool use_series(double a, Path path) {
  if (path == Path::series) {
    if (a == 0.0) throw DomainError("series path undefined at a = 0");
    return true;
  }
  if (path == Path::airy) return false;
  return std::abs(a) >= kSeriesSwitch;
}

// Large-|a| sums with optimal truncation: a term is dropped as soon as its
// magnitude exceeds the previous one.
AllowedCombos allowed_series(double a) {
  const CoeffTables& t = default_tables();
  const double x = -a;
  const double r = std::sqrt(x);
  AllowedCombos c;
  c.a = a;
  c.w = r;
  c.dw = -0.5 / r;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= t.n_max; ++n) {
    const double p = 0.5 * (1.0 - 3.0 * n);
    const double mag = t.b1_plus[n] * std::pow(x, p);
    if (std::abs(mag) > prev) break;
    prev = std::abs(mag);
    const double dmag = -p * mag / x;  // d/da of |a|^p is -p |a|^{p-1}
    const auto [re, im] = i_power(1 - 3 * n);
    c.u += re * mag;
    c.w += im * mag;
    c.du += re * dmag;
    c.dw += im * dmag;
  }
  prev = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= t.n_max; ++n) {
    const double p = 0.5 * (3.0 - 3.0 * n);
    const double mag = t.b2_plus[n] * std::pow(x, p);
    if (std::abs(mag) > prev) break;
    prev = std::abs(mag);
    const double dmag = -p * mag / x;
    const auto [re, im] = i_power(3 - 3 * n);
    c.h2 += re * mag;
    c.g2 += im * mag;
    c.dh2 += re * dmag;
    c.dg2 += im * dmag;
  }
  return c;
}

AllowedCombos allowed_airy(double a) {
  const airy::ModulusDD m = airy::modulus_sq_dd(a);
  const DD A(a);
  const DD a2 = A * A;
  const DD u = m.dm2 / (m.m2 * 2.0);
  const DD w = detail::dd_const::inv_pi / m.m2;
  const DD uw = u * u - w * w;
  const DD h2 = (-8.0 * a2 * uw - 4.0 * A * u + 8.0 * a2 * A - 3.0) / 30.0;
  const DD g2 = w * (-16.0 * a2 * u - 4.0 * A) / 30.0;
  // y1' = a - y1^2 and y2' = -2 y1 y2 + (2a y1' - y1)/3 split into real parts
  const DD du = A - uw;
  const DD dw = -2.0 * u * w;
  const DD dh2 = -2.0 * (u * h2 - w * g2) + (2.0 * A * du - u) / 3.0;
  const DD dg2 = -2.0 * (u * g2 + w * h2) + (2.0 * A * dw - w) / 3.0;
  return {a,          u.value(),  w.value(),   h2.value(), g2.value(),
          du.value(), dw.value(), dh2.value(), dg2.value()};
}

ForbiddenCombos forbidden_series(double a) {
  const CoeffTables& t = default_tables();
  const double r = std::sqrt(a);
  ForbiddenCombos c;
  c.a = a;
  c.y1m = -r;
  c.y1p = r;
  c.dy1m = -0.5 / r;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= t.n_max; ++n) {
    const double p = 0.5 * (1.0 - 3.0 * n);
    const double pw = std::pow(a, p);
    const double mag = std::abs(t.b1_minus[n] * pw);
    if (mag > prev) break;
    prev = mag;
    c.y1m += t.b1_minus[n] * pw;
    c.y1p += t.b1_plus[n] * pw;
    c.dy1m += p * t.b1_minus[n] * pw / a;
  }
  prev = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= t.n_max; ++n) {
    const double p = 0.5 * (3.0 - 3.0 * n);
    const double pw = std::pow(a, p);
    const double mag = std::abs(t.b2_minus[n] * pw);
    if (mag > prev) break;
    prev = mag;
    c.y2m += t.b2_minus[n] * pw;
    c.y2p += t.b2_plus[n] * pw;
    c.dy2m += p * t.b2_minus[n] * pw / a;
  }
  return c;
}

DD y2_dd(const DD& a, const DD& y1) {
  const DD a2 = a * a;
  return (-8.0 * a2 * y1 * y1 - 4.0 * a * y1 + 8.0 * a2 * a - 3.0) / 30.0;
}

ForbiddenCombos forbidden_airy(double a) {
  const DD A(a);
  const DD y1m = airy::ai_log_derivative(a);
  const DD y1p = airy::bi_log_derivative(a);
  const DD y2m = y2_dd(A, y1m);
  const DD dy1m = A - y1m * y1m;
  const DD dy2m = -2.0 * y1m * y2m + (2.0 * A * dy1m - y1m) / 3.0;
  return {a, y1m.value(), y1p.value(), y2m.value(), y2_dd(A, y1p).value(), dy1m.value(),
          dy2m.value()};
}

// Lift a function value f(a) with derivative df into the jet space of `a`.
template <class T>
T compose(double f, double df, const T& a) {
  if constexpr (std::is_same_v<T, double>) {
    (void)df;
    (void)a;
    return f;
  } else {
    T r(f);
    r.coeff(1) = df * a.coeff(1);
    return r;
  }
}

// Series rewritten in Q so that it stays finite at Q' = 0. With
// X = hbar Q' |Q|^{-3/2}, the allowed-region sums become
//   phase = (sqrt|Q|/hbar) [1 + sum_{n even} Im c1_n X^n]
//         + Q'' hbar |Q|^{-3/2} sum_{n even} Im c2_n X^{n-2}
//   mean  = (sqrt|Q|/hbar) sum_{n odd} Re c1_n X^n
//         + Q'' hbar |Q|^{-3/2} sum_{n odd} Re c2_n X^{n-2}
// with c1_n = B+_{n,1} i^{1-3n}, c2_n = B+_{n,2} i^{3-3n}.
template <class T>
void q_form(const T& Q, const T& Q1, const T& Q2, double hbar, Region region, T& mean,
            T& phase) {
  using std::sqrt;
  const CoeffTables& t = default_tables();
  if (region == Region::allowed) {
    const T A = -Q;
    const T sq = sqrt(A);
    const T inv = T(1.0) / (A * sq);
    const T X = hbar * Q1 * inv;
    T m1(0.0), p1(0.0), m2(0.0), p2(0.0);
    T xn(1.0), xn2(1.0);  // X^n and X^{n-2}
    for (int n = 1; n <= t.n_max; ++n) {
      xn = xn * X;
      if (n >= 3) xn2 = xn2 * X;
      const auto c1 = i_power(1 - 3 * n);
      if (n % 2 == 1) {
        m1 += t.b1_plus[n] * c1[0] * xn;
      } else {
        p1 += t.b1_plus[n] * c1[1] * xn;
      }
      if (n >= 2) {
        const auto c2 = i_power(3 - 3 * n);
        if (n % 2 == 1) {
          m2 += t.b2_plus[n] * c2[0] * xn2;
        } else {
          p2 += t.b2_plus[n] * c2[1] * xn2;
        }
      }
    }
    const T lead = sq / hbar;
    const T second = Q2 * hbar * inv;
    mean = lead * m1 + second * m2;
    phase = lead * (T(1.0) + p1) + second * p2;
    return;
  }
  const double s = value_of(Q1) < 0.0 ? -1.0 : 1.0;
  const T sq = sqrt(Q);
  const T inv = T(1.0) / (Q * sq);
  const T X = hbar * Q1 * inv;
  T m1(-s), m2(0.0);
  T xn(1.0), xn2(1.0);
  double sn = s;  // s^{n+1} at step n
  for (int n = 1; n <= t.n_max; ++n) {
    xn = xn * X;
    sn *= s;
    m1 += t.b1_minus[n] * sn * xn;
    if (n >= 2) {
      if (n >= 3) xn2 = xn2 * X;
      m2 += t.b2_minus[n] * sn * xn2;  // s^{n-1} = s^{n+1}
    }
  }
  mean = sq / hbar * m1 + Q2 * hbar * inv * m2;
  phase = T(0.0);
}

// Airy-path terms: mean = P y1 + R y2 with P = hbar^{-2/3} sgn(Q') |Q'|^{1/3}
// and R = Q''/Q'; the allowed phase carries an extra sgn(Q').
template <class T>
void airy_form(const T& Q, const T& Q1, const T& Q2, double a, double hbar, Region region,
               T& mean, T& phase) {
  using std::abs;
  using std::pow;
  const double s = value_of(Q1) < 0.0 ? -1.0 : 1.0;
  const double h23 = std::cbrt(hbar * hbar);
  const T absq1 = abs(Q1);
  const T P = s * pow(absq1, 1.0 / 3.0) / h23;
  const T R = Q2 / Q1;
  const T aj = Q / (h23 * pow(absq1, 2.0 / 3.0));
  if (region == Region::allowed) {
    const AllowedCombos c = allowed_combos(std::min(a, 0.0), Path::airy);
    const T u = compose(c.u, c.du, aj), w = compose(c.w, c.dw, aj);
    const T h2 = compose(c.h2, c.dh2, aj), g2 = compose(c.g2, c.dg2, aj);
    mean = P * u + R * h2;
    phase = s * (P * w + R * g2);
    return;
  }
  const ForbiddenCombos c = forbidden_combos(std::max(a, 0.0), Path::airy);
  mean = P * compose(c.y1m, c.dy1m, aj) + R * compose(c.y2m, c.dy2m, aj);
  phase = T(0.0);
}

double checked_a(const QBundle& b, double hbar, Region region) {
  if (b.dQ == 0.0) {
    if (b.Q == 0.0) throw DomainError("Q and Q' vanish together; log-derivative undefined");
    if ((region == Region::allowed) != (b.Q < 0.0)) {
      throw DomainError("bundle lies outside the requested region");
    }
    return b.Q < 0.0 ? -std::numeric_limits<double>::infinity()
                     : std::numeric_limits<double>::infinity();
  }
  const double a = dimensionless_a(b, hbar);
  if (region == Region::allowed ? a > kTurningSlack : a < -kTurningSlack) {
    throw DomainError("bundle lies outside the requested region (a = " + std::to_string(a) +
                      ")");
  }
  return a;
}

template <class T>
void evaluate(const T& Q, const T& Q1, const T& Q2, double a, double hbar, Region region,
              T& mean, T& phase) {
  if (std::abs(a) >= kSeriesSwitch) {
    q_form(Q, Q1, Q2, hbar, region, mean, phase);
  } else {
    airy_form(Q, Q1, Q2, a, hbar, region, mean, phase);
  }
}

}  // namespace

CoeffTables b_tables(int n_max) {
  if (n_max < 1 || n_max > 40) throw DomainError("b_tables requires 1 <= n_max <= 40");
  CoeffTables t;
  t.n_max = n_max;
  for (auto* v : {&t.b1_plus, &t.b1_minus, &t.b2_plus, &t.b2_minus}) v->assign(n_max + 1, 0.0);
  for (const double sign : {1.0, -1.0}) {
    std::vector<double>& b = sign > 0 ? t.b1_plus : t.b1_minus;
    b[1] = -0.25;
    for (int n = 1; n < n_max; ++n) {
      double conv = 0.0;
      for (int k = 1; k <= n; ++k) conv += b[k] * b[n + 1 - k];
      b[n + 1] = -sign * (0.5 * conv + 0.25 * (1.0 - 3.0 * n) * b[n]);
    }
  }
  for (int n = 2; n <= n_max; ++n) {
    t.b2_plus[n] = -0.4 * n * t.b1_plus[n];
    t.b2_minus[n] = -0.4 * n * t.b1_minus[n];
  }
  return t;
}

const CoeffTables& default_tables() {
  static const CoeffTables tables = b_tables(kSeriesTerms);
  return tables;
}

double dimensionless_a(const QBundle& b, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  if (b.Q == 0.0) return 0.0;
  if (b.dQ == 0.0) throw DomainError("a is singular where Q' = 0 and Q != 0");
  const double c = std::cbrt(hbar * std::abs(b.dQ));
  return b.Q / (c * c);
}

AllowedCombos allowed_combos(double a, Path path) {
  if (!(a <= 0.0)) throw DomainError("allowed_combos requires a <= 0");
  return use_series(a, path) ? allowed_series(a) : allowed_airy(a);
}

ForbiddenCombos forbidden_combos(double a, Path path) {
  if (!(a >= 0.0)) throw DomainError("forbidden_combos requires a >= 0");
  return use_series(a, path) ? forbidden_series(a) : forbidden_airy(a);
}

double y2_closed_form(double a, double y1) {
  return (-8.0 * a * a * y1 * y1 - 4.0 * a * y1 + 8.0 * a * a * a - 3.0) / 30.0;
}

LogDerivTerms log_deriv_terms(const QBundle& b, double hbar, Region region) {
  const double a = checked_a(b, hbar, region);
  LogDerivTerms out;
  evaluate(b.Q, b.dQ, b.d2Q, a, hbar, region, out.mean, out.phase);
  return out;
}

LogDerivJet log_deriv_jet(const QBundle& b, double hbar, Region region) {
  using J = Taylor<1>;
  const double a = checked_a(b, hbar, region);
  const J Q = J::from_derivatives(std::array<double, 2>{b.Q, b.dQ});
  const J Q1 = J::from_derivatives(std::array<double, 2>{b.dQ, b.d2Q});
  const J Q2 = J::from_derivatives(std::array<double, 2>{b.d2Q, b.d3Q});
  J mean, phase;
  evaluate(Q, Q1, Q2, a, hbar, region, mean, phase);
  return {mean.value(), phase.value(), mean.derivative(1), phase.derivative(1)};
}

double riccati_residual(double q, double E, const PotentialModel& potential, double hbar,
                        double mass) {
  const QBundle b = q_bundle(potential, q, E, mass);
  if (!(b.Q > 0.0)) throw DomainError("riccati_residual requires a classically forbidden q");
  double scale = 1.0;
  if (b.dQ != 0.0) {
    const double ell = std::cbrt(hbar * hbar / std::abs(b.dQ));
    scale = std::min(ell, std::abs(b.Q / b.dQ));
  }
  const double h = 1e-3 * scale;
  auto Y = [&](double x) {
    return log_deriv_terms(q_bundle(potential, x, E, mass), hbar, Region::forbidden).mean;
  };
  const double y = Y(q);
  const double dy = (Y(q - 2 * h) - 8.0 * Y(q - h) + 8.0 * Y(q + h) - Y(q + 2 * h)) / (12.0 * h);
  const double target = b.Q / (hbar * hbar);
  return std::abs(dy + y * y - target) / std::abs(target);
}

}  // namespace uniwkb::wkb
