#include "uniwkb/airy.hpp"

#include <array>
#include <cmath>

#include "uniwkb/error.hpp"

namespace uniwkb::airy {

using detail::DD;
namespace ddc = detail::dd_const;

namespace {

constexpr int kAsymTerms = 120;
constexpr double kSeriesEps = 1e-34;
constexpr double kAsymEps = 1e-33;

// u_k, v_k of the large-argument expansions and the coefficients of the
// negative-axis modulus series pi sqrt(x) M^2(-x) ~ sum (-1)^k m_k x^{-3k}.
struct AsymptoticCoefficients {
  std::array<DD, kAsymTerms> u;
  std::array<DD, kAsymTerms> v;
  std::array<DD, kAsymTerms> m;
};

const AsymptoticCoefficients& coefficients() {
  static const AsymptoticCoefficients c = [] {
    AsymptoticCoefficients t;
    t.u[0] = DD(1.0);
    t.v[0] = DD(1.0);
    t.m[0] = DD(1.0);
    for (int k = 1; k < kAsymTerms; ++k) {
      const double odd = (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0);
      t.u[k] = t.u[k - 1] * odd / ((2.0 * k - 1.0) * 216.0 * k);
      t.v[k] = -(t.u[k] * (6.0 * k + 1.0) / (6.0 * k - 1.0));
      t.m[k] = t.m[k - 1] * odd / (96.0 * k);
    }
    return t;
  }();
  return c;
}

struct FourDD {
  DD ai, dai, bi, dbi;
};

FourDD maclaurin(double a) {
  const DD a3 = DD(a) * a * a;
  DD f(1.0), df(0.0), g(a), dg(1.0);
  DD tf(1.0), tdf = DD(a) * a * 0.5, tg(a), tdg(1.0);
  df = tdf;
  for (int k = 1; k < 400; ++k) {
    tf = tf * a3 / ((3.0 * k - 1.0) * (3.0 * k));
    if (k >= 2) tdf = tdf * a3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0));
    tg = tg * a3 / ((3.0 * k) * (3.0 * k + 1.0));
    tdg = tdg * a3 / ((3.0 * k - 2.0) * (3.0 * k));
    f += tf;
    if (k >= 2) df += tdf;
    g += tg;
    dg += tdg;
    const double scale = std::abs(f.hi) + std::abs(g.hi) + std::abs(df.hi) + std::abs(dg.hi);
    const double last =
        std::abs(tf.hi) + std::abs(tdf.hi) + std::abs(tg.hi) + std::abs(tdg.hi);
    if (k >= 2 && last <= kSeriesEps * scale) break;
  }
  const DD c1f = ddc::ai0 * f, c2g = ddc::neg_dai0 * g;
  const DD c1df = ddc::ai0 * df, c2dg = ddc::neg_dai0 * dg;
  return {c1f - c2g, c1df - c2dg, ddc::sqrt3 * (c1f + c2g), ddc::sqrt3 * (c1df + c2dg)};
}

// Sum of sign^k c_k z^k with z = 1/zeta, stopping at the smallest term.
DD asymptotic_sum(const std::array<DD, kAsymTerms>& c, const DD& inv_zeta, double sign) {
  DD sum = c[0];
  DD power(1.0);
  double prev = std::abs(c[0].hi);
  double sgn = 1.0;
  for (int k = 1; k < kAsymTerms; ++k) {
    power = power * inv_zeta;
    sgn *= sign;
    const DD term = c[k] * power * sgn;
    const double mag = std::abs(term.hi);
    if (mag > prev) break;
    sum += term;
    if (mag <= kAsymEps * std::abs(sum.hi)) break;
    prev = mag;
  }
  return sum;
}

// Even/odd split used on the negative axis:
// even = sum (-1)^k c_{2k} z^{2k}, odd = sum (-1)^k c_{2k+1} z^{2k+1}.
void split_sums(const std::array<DD, kAsymTerms>& c, const DD& inv_zeta, DD& even, DD& odd) {
  even = c[0];
  odd = DD(0.0);
  DD power(1.0);
  double prev = std::abs(c[0].hi);
  for (int k = 1; k < kAsymTerms; ++k) {
    power = power * inv_zeta;
    const int j = k / 2;
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    const DD term = c[k] * power * sgn;
    const double mag = std::abs(term.hi);
    if (mag > prev) break;
    if (k % 2 == 0) {
      even += term;
    } else {
      odd += term;
    }
    if (mag <= kAsymEps * (std::abs(even.hi) + std::abs(odd.hi))) break;
    prev = mag;
  }
}

bool use_series(double a, Regime regime) {
  if (regime == Regime::series) return true;
  if (regime == Regime::asymptotic) {
    if (a == 0.0) throw DomainError("asymptotic Airy expansion undefined at a = 0");
    return false;
  }
  return std::abs(a) <= kSwitchRadius;
}

DD zeta_of(double x) {  // (2/3) x^{3/2}, x > 0
  return DD(x) * detail::sqrt(DD(x)) * 2.0 / 3.0;
}

// Sums for a > 0: alternating (Ai) and plain (Bi) series.
struct PositiveSums {
  DD zeta, sqrt_a, quarter;  // zeta, a^{1/2}, a^{1/4}
  DD ua, va, ub, vb;
};

PositiveSums positive_sums(double a) {
  const auto& c = coefficients();
  PositiveSums s;
  s.zeta = zeta_of(a);
  s.sqrt_a = detail::sqrt(DD(a));
  s.quarter = detail::sqrt(s.sqrt_a);
  const DD inv = 1.0 / s.zeta;
  s.ua = asymptotic_sum(c.u, inv, -1.0);
  s.va = asymptotic_sum(c.v, inv, -1.0);
  s.ub = asymptotic_sum(c.u, inv, 1.0);
  s.vb = asymptotic_sum(c.v, inv, 1.0);
  return s;
}

const double kSqrtPi = std::sqrt(M_PI);

AiryEval negative_asymptotic(double a) {
  const double x = -a;
  const auto& c = coefficients();
  const DD zeta = zeta_of(x);
  const DD inv = 1.0 / zeta;
  DD p, q, r, s;
  split_sums(c.u, inv, p, q);
  split_sums(c.v, inv, r, s);
  // phase zeta - pi/4 reduced modulo 2 pi in double-double
  DD theta = zeta - ddc::pi * 0.25;
  const DD two_pi = ddc::pi * 2.0;
  theta = theta - two_pi * std::nearbyint(theta.hi / two_pi.hi);
  const double cs = std::cos(theta.value());
  const double sn = std::sin(theta.value());
  const double quarter = std::sqrt(std::sqrt(x));
  const double pv = p.value(), qv = q.value(), rv = r.value(), sv = s.value();
  AiryEval out;
  out.a = a;
  out.ai = (cs * pv + sn * qv) / (kSqrtPi * quarter);
  out.bi = (-sn * pv + cs * qv) / (kSqrtPi * quarter);
  out.dai = quarter * (sn * rv - cs * sv) / kSqrtPi;
  out.dbi = quarter * (cs * rv + sn * sv) / kSqrtPi;
  return out;
}

}  // namespace

AiryEval airy_eval(double a, Regime regime) {
  if (!std::isfinite(a)) throw DomainError("Airy argument must be finite");
  if (a > kBiOverflowBound) {
    throw OverflowError("Bi(a) overflows for a > 104; use airy_scaled");
  }
  if (use_series(a, regime)) {
    const FourDD v = maclaurin(a);
    return {a, v.ai.value(), v.dai.value(), v.bi.value(), v.dbi.value()};
  }
  if (a < 0.0) return negative_asymptotic(a);
  const PositiveSums s = positive_sums(a);
  const double zeta = s.zeta.value();
  const double quarter = s.quarter.value();
  const double decay = std::exp(-zeta);
  const double growth = std::exp(zeta);
  AiryEval out;
  out.a = a;
  out.ai = decay * s.ua.value() / (2.0 * kSqrtPi * quarter);
  out.dai = -decay * quarter * s.va.value() / (2.0 * kSqrtPi);
  out.bi = growth * s.ub.value() / (kSqrtPi * quarter);
  out.dbi = growth * quarter * s.vb.value() / kSqrtPi;
  return out;
}

ScaledAiryEval airy_scaled(double a, Regime regime) {
  if (!(a >= 0.0)) throw DomainError("airy_scaled requires a >= 0");
  ScaledAiryEval out;
  out.a = a;
  if (use_series(a, regime)) {
    const FourDD v = maclaurin(a);
    out.zeta = zeta_of(a).value();
    const double up = std::exp(out.zeta), down = std::exp(-out.zeta);
    out.ai_s = v.ai.value() * up;
    out.dai_s = v.dai.value() * up;
    out.bi_s = v.bi.value() * down;
    out.dbi_s = v.dbi.value() * down;
    return out;
  }
  const PositiveSums s = positive_sums(a);
  const double quarter = s.quarter.value();
  out.zeta = s.zeta.value();
  out.ai_s = s.ua.value() / (2.0 * kSqrtPi * quarter);
  out.dai_s = -quarter * s.va.value() / (2.0 * kSqrtPi);
  out.bi_s = s.ub.value() / (kSqrtPi * quarter);
  out.dbi_s = quarter * s.vb.value() / kSqrtPi;
  return out;
}

ModulusDD modulus_sq_dd(double a, Regime regime) {
  if (!(a <= 0.0)) throw DomainError("modulus_sq requires a <= 0");
  if (use_series(a, regime)) {
    const FourDD v = maclaurin(a);
    return {v.ai * v.ai + v.bi * v.bi, (v.ai * v.dai + v.bi * v.dbi) * 2.0};
  }
  const double x = -a;
  const auto& c = coefficients();
  const DD xd(x);
  const DD sx = detail::sqrt(xd);
  const DD inv_x3 = 1.0 / (xd * xd * xd);
  // m2 = (1/pi) sum m_k (-1)^k x^{-3k-1/2}
  // dm2/da = (1/pi) sum m_k (-1)^k (3k+1/2) x^{-3k-3/2}
  DD m2 = c.m[0];
  DD dm2 = c.m[0] * 0.5;
  DD power(1.0);
  double prev = 1.0;
  for (int k = 1; k < kAsymTerms; ++k) {
    power = -(power * inv_x3);
    const DD term = c.m[k] * power;
    const double mag = std::abs(term.hi);
    if (mag > prev) break;
    m2 += term;
    dm2 += term * (3.0 * k + 0.5);
    if (mag <= kAsymEps * std::abs(m2.hi)) break;
    prev = mag;
  }
  return {m2 * ddc::inv_pi / sx, dm2 * ddc::inv_pi / (sx * xd)};
}

ModulusEval modulus_sq(double a, Regime regime) {
  const ModulusDD m = modulus_sq_dd(a, regime);
  return {a, m.m2.value(), m.dm2.value()};
}

DD ai_log_derivative(double a, Regime regime) {
  if (!(a >= 0.0)) throw DomainError("ai_log_derivative requires a >= 0");
  if (use_series(a, regime)) {
    const FourDD v = maclaurin(a);
    return v.dai / v.ai;
  }
  const PositiveSums s = positive_sums(a);
  return -(s.sqrt_a * s.va / s.ua);
}

DD bi_log_derivative(double a, Regime regime) {
  if (!(a >= 0.0)) throw DomainError("bi_log_derivative requires a >= 0");
  if (use_series(a, regime)) {
    const FourDD v = maclaurin(a);
    return v.dbi / v.bi;
  }
  const PositiveSums s = positive_sums(a);
  return s.sqrt_a * s.vb / s.ub;
}

}  // namespace uniwkb::airy
