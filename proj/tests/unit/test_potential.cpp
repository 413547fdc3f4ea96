#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "uniwkb/error.hpp"
#include "uniwkb/expression.hpp"
#include "uniwkb/potential.hpp"

using namespace uniwkb;

namespace {

// Sixth-order central differences of V at q.
std::array<double, 3> fd_derivatives(const PotentialModel& pot, double q, double h) {
  auto f = [&](int k) { return pot.value(q + k * h); };
  const double d1 = (-f(-3) + 9 * f(-2) - 45 * f(-1) + 45 * f(1) - 9 * f(2) + f(3)) / (60 * h);
  const double d2 =
      (2 * f(-3) - 27 * f(-2) + 270 * f(-1) - 490 * f(0) + 270 * f(1) - 27 * f(2) + 2 * f(3)) /
      (180 * h * h);
  constexpr double c3[] = {-7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0.0,
                           -61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240};
  double d3 = 0.0;
  for (int k = -4; k <= 4; ++k) d3 += c3[k + 4] * f(k);
  d3 /= h * h * h;
  return {d1, d2, d3};
}

// Random expression from a small grammar of smooth terms.
std::string random_term(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(0.2, 2.0);
  std::uniform_int_distribution<int> pick(0, 9);
  char buf[128];
  const double c = coef(rng), d = coef(rng);
  switch (pick(rng)) {
    case 0: std::snprintf(buf, sizeof buf, "%.3f*q^4", c); break;
    case 1: std::snprintf(buf, sizeof buf, "%.3f*q^2 - %.3f*q", c, d); break;
    case 2: std::snprintf(buf, sizeof buf, "-%.3f*exp(-%.3f*q^2)", c, d); break;
    case 3: std::snprintf(buf, sizeof buf, "%.3f*sin(%.3f*q)", c, d); break;
    case 4: std::snprintf(buf, sizeof buf, "%.3f*cosh(%.3f*q)", c, d); break;
    case 5: std::snprintf(buf, sizeof buf, "sqrt(%.3f + q^2)", c); break;
    case 6: std::snprintf(buf, sizeof buf, "%.3f*tanh(%.3f*q)^2", c, d); break;
    case 7: std::snprintf(buf, sizeof buf, "ln(%.3f + q^2)", c); break;
    case 8: std::snprintf(buf, sizeof buf, "q^3/(%.3f + q^2)", c); break;
    default: std::snprintf(buf, sizeof buf, "%.3f*cos(q)*exp(-%.3f*q)", c, d); break;
  }
  return buf;
}

TEST(ExpressionAD, RandomizedAgainstFiniteDifferences) {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> point(-1.5, 1.5);
  std::uniform_int_distribution<int> op(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = random_term(rng);
    const int o = op(rng);
    if (o == 1) text = "(" + text + ") + (" + random_term(rng) + ")";
    if (o == 2) text = "(" + text + ") * (" + random_term(rng) + ")";
    const PotentialModel pot = parse_potential(text);
    const double q = point(rng);
    const PotentialJet jet = pot.eval(q);
    const auto fd = fd_derivatives(pot, q, 1e-2);
    const double ad[] = {jet.dv, jet.d2v, jet.d3v};
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(ad[k], fd[k], 1e-6 * (std::abs(fd[k]) + 1e-3))
          << "V^(" << k + 1 << ") of " << text << " at q=" << q;
    }
  }
}

TEST(Expression, PrecedenceAndUnaryMinus) {
  EXPECT_DOUBLE_EQ(Expression::parse("-q^2").evaluate(3.0), -9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2").evaluate(0.0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1 - 2 - 3").evaluate(0.0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("8 / 2 / 2").evaluate(0.0), 2.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2*(q+1)").evaluate(1.0), 4.0);
}

TEST(Expression, ParametersAreBound) {
  const Expression e = Expression::parse("k*q^2 + c", {{"k", 3.0}, {"c", -1.0}});
  EXPECT_DOUBLE_EQ(e.evaluate(2.0), 11.0);
}

struct BadInput {
  const char* text;
  std::size_t column;
};

class ExpressionErrors : public ::testing::TestWithParam<BadInput> {};

TEST_P(ExpressionErrors, ReportColumn) {
  try {
    Expression::parse(GetParam().text);
    FAIL() << "parsed: " << GetParam().text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), GetParam().column) << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(Malformed, ExpressionErrors,
                         ::testing::Values(BadInput{"q^4/*4", 5}, BadInput{"2*(q+1", 7},
                                           BadInput{"foo(q)", 1}, BadInput{"q + x", 5},
                                           BadInput{"", 1}, BadInput{"1..2", 3},
                                           BadInput{"exp q", 5}, BadInput{"q^2)", 4}));

TEST(Builtins, HarmonicShape) {
  const PotentialModel pot = make_builtin(PotentialKind::harmonic, {{"k", 0.5}}, 1.0, 1.0);
  const PotentialJet j = pot.eval(2.0);
  EXPECT_DOUBLE_EQ(j.v, 2.0);
  EXPECT_DOUBLE_EQ(j.dv, 2.0);
  EXPECT_DOUBLE_EQ(j.d2v, 1.0);
  EXPECT_DOUBLE_EQ(j.d3v, 0.0);
}

TEST(Builtins, MorseDepthAndAliases) {
  const PotentialModel a = make_builtin(PotentialKind::morse, {{"gamma", 4.5}}, 1.0, 1.0);
  const PotentialModel b = make_builtin(PotentialKind::morse, {{"g", 4.5}, {"a", 1.0}}, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a.value(0.0), -0.5 * 4.5 * 4.5);
  EXPECT_DOUBLE_EQ(a.value(0.7), b.value(0.7));
  EXPECT_NEAR(find_minimum(a), 0.0, 1e-12);
}

TEST(Builtins, PoschlTellerIsAttractive) {
  const PotentialModel pot = make_builtin(PotentialKind::poschl_teller, {{"lambda", 5.0}}, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(pot.value(0.0), -10.0);
  EXPECT_LT(pot.value(1.0), 0.0);
  EXPECT_NEAR(pot.value(40.0), 0.0, 1e-30);
  EXPECT_DOUBLE_EQ(well_top(pot), pot.value(pot.search_window().first));
}

TEST(Builtins, AnalyticJetsMatchFiniteDifferences) {
  const PotentialModel pots[] = {
      make_builtin(PotentialKind::morse, {{"gamma", 4.5}, {"alpha", 1.3}}, 1.0, 2.0),
      make_builtin(PotentialKind::poschl_teller, {{"lambda", 5.0}, {"alpha", 0.7}}, 1.5, 1.0)};
  for (const PotentialModel& pot : pots) {
    for (double q : {-1.1, -0.2, 0.0, 0.4, 2.5}) {
      const PotentialJet j = pot.eval(q);
      const auto fd = fd_derivatives(pot, q, 1e-2);
      EXPECT_NEAR(j.dv, fd[0], 1e-7 * (std::abs(fd[0]) + 1.0)) << pot.description() << q;
      EXPECT_NEAR(j.d2v, fd[1], 1e-7 * (std::abs(fd[1]) + 1.0)) << pot.description() << q;
      EXPECT_NEAR(j.d3v, fd[2], 1e-6 * (std::abs(fd[2]) + 1.0)) << pot.description() << q;
    }
  }
}

TEST(Builtins, ParameterDomain) {
  EXPECT_THROW(make_builtin(PotentialKind::harmonic, {{"k", -1.0}}, 1.0, 1.0), DomainError);
  EXPECT_THROW(make_builtin(PotentialKind::harmonic, {}, 1.0, 1.0), DomainError);
  EXPECT_THROW(make_builtin(PotentialKind::morse, {{"gamma", 0.4}}, 1.0, 1.0), DomainError);
  EXPECT_THROW(make_builtin(PotentialKind::poschl_teller, {{"lambda", 1.0}}, 1.0, 1.0),
               DomainError);
  EXPECT_THROW(make_builtin(PotentialKind::harmonic, {{"k", 1.0}}, 0.0, 1.0), DomainError);
}

TEST(Kinds, NamesRoundTrip) {
  for (auto kind : {PotentialKind::harmonic, PotentialKind::morse, PotentialKind::poschl_teller}) {
    EXPECT_EQ(parse_kind(kind_name(kind)), kind);
  }
  EXPECT_EQ(parse_kind("pt"), PotentialKind::poschl_teller);
  EXPECT_EQ(parse_kind("expr"), PotentialKind::expression);
  EXPECT_THROW(parse_kind("square"), DomainError);
}

TEST(TurningPoints, HarmonicIsSymmetric) {
  const PotentialModel pot = make_builtin(PotentialKind::harmonic, {{"k", 0.5}}, 1.0, 1.0);
  const TurningPoints tp = find_turning_points(pot, 0.5, 1.0);
  EXPECT_NEAR(tp.q_minus, -1.0, 1e-14);
  EXPECT_NEAR(tp.q_plus, 1.0, 1e-14);
  EXPECT_NEAR(tp.q_m, 0.0, 1e-12);
}

TEST(TurningPoints, MorseClosedForm) {
  const PotentialModel pot = make_builtin(PotentialKind::morse, {{"gamma", 4.5}}, 1.0, 1.0);
  const double c = 0.5 * 4.5 * 4.5, E = -7.0;
  // e^{-q} = 1 -/+ sqrt(1 + E/c)
  const double r = std::sqrt(1.0 + E / c);
  const TurningPoints tp = find_turning_points(pot, E, 1.0);
  EXPECT_NEAR(tp.q_minus, -std::log(1.0 + r), 1e-13);
  EXPECT_NEAR(tp.q_plus, -std::log(1.0 - r), 1e-13);
}

TEST(TurningPoints, NoBoundState) {
  const PotentialModel pot = make_builtin(PotentialKind::morse, {{"gamma", 4.5}}, 1.0, 1.0);
  EXPECT_THROW(find_turning_points(pot, -20.0, 1.0), NoBoundStateError);
  EXPECT_THROW(find_turning_points(pot, 0.5, 1.0), NoBoundStateError);
}

TEST(Minimum, RejectsDoubleWell) {
  EXPECT_THROW(find_minimum(parse_potential("q^4 - 2*q^2")), DomainError);
  EXPECT_NEAR(find_minimum(parse_potential("(q-0.3)^2")), 0.3, 1e-10);
}

TEST(Callable, FiniteDifferenceJet) {
  const PotentialModel pot = from_function([](double q) { return std::cosh(q); });
  const PotentialJet j = pot.eval(0.5);
  EXPECT_NEAR(j.dv, std::sinh(0.5), 1e-9);
  EXPECT_NEAR(j.d2v, std::cosh(0.5), 1e-6);
  EXPECT_NEAR(j.d3v, std::sinh(0.5), 1e-3);
}

TEST(DecayExtent, ReachesCutoff) {
  const PotentialModel pot = make_builtin(PotentialKind::harmonic, {{"k", 0.5}}, 1.0, 1.0);
  const double hi = decay_extent(pot, 0.5, 1.0, 1.0, 1.0, +1, 10.0);
  // int_1^x sqrt(q^2 - 1) dq = (x sqrt(x^2-1) - acosh x)/2
  const double exponent = 0.5 * (hi * std::sqrt(hi * hi - 1.0) - std::acosh(hi));
  EXPECT_GE(exponent, 10.0);
  EXPECT_LT(exponent, 10.0 * 1.6);
}

}  // namespace
