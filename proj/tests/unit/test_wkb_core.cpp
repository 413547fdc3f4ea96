#include <gtest/gtest.h>

#include <cmath>

#include "uniwkb/error.hpp"
#include "uniwkb/potential.hpp"
#include "uniwkb/wkb_core.hpp"

using namespace uniwkb;
using wkb::Path;
using wkb::Region;

namespace {

// mpmath at 40 digits: y1 = (Ai' + i Bi')/(Ai + i Bi), y2 from the closed form.
struct AllowedRef {
  double a, u, w, h2, g2;
};
constexpr AllowedRef kAllowed[] = {
    {-0.5, 0.25700704016715658, 0.85801198104501453, -0.071524067927435699, 0.027798782779489284},
    {-3.0, 0.080942708025369755, 1.7411199481146537, -0.0077502326131465003, 0.019979353978382994},
    {-9.5, 0.026287246759328404, 3.0827664777646617, -0.00032365486923535236,
     0.0042352771737570384},
    {-10.0, 0.024976725233246129, 3.1627700793613787, -0.00027801701688578156,
     0.0039260125809737062},
    {-12.0, 0.020822076265181752, 3.4644142259460635, -0.00016166700090174488,
     0.0029951344931929725},
    {-15.0, 0.01666204667545369, 3.8731624681687111, -8.3044769448642417e-5,
     0.0021472771883243317},
    {-30.0, 0.0083330440571196738, 5.477257267906852, -1.0412129543754527e-5,
     0.00076053131697572273},
};

struct ForbiddenRef {
  double a, y1m, y2m, y1p, y2p;
};
constexpr ForbiddenRef kForbidden[] = {
    {0.25, -0.85540159860155978, -0.079515144961449741, 0.64475223322401226, -0.12425349847825626},
    {2.0, -1.5201633881848286, -0.026246271713462061, 1.2433486755111592, 0.052796695708646771},
    {9.5, -3.1079878054418881, -0.0039714303035821403, 3.0552981922195117, 0.0046367791810430866},
    {10.0, -3.1868054335944625, -0.0036959975324584996, 3.1367582215806044,
     0.0042652871321033472},
    {12.0, -3.4846324351326762, -0.0028552901692070399, 3.442943069512548, 0.0031830604476676701},
    {15.0, -3.8894751633609667, -0.0020724573871635727, 3.8561325512915933,
     0.0022397095800860302},
    {30.0, -5.4855274968497301, -0.0007504992728723675, 5.4688602513278881,
     0.00077134169685116487},
};

void expect_rel(double got, double want, double tol, const char* what, double a) {
  EXPECT_NEAR(got, want, tol * std::abs(want)) << what << " at a=" << a;
}

TEST(CoeffTables, LeadingCoefficients) {
  const wkb::CoeffTables& t = wkb::default_tables();
  EXPECT_DOUBLE_EQ(t.b1_plus[1], -0.25);
  EXPECT_DOUBLE_EQ(t.b1_minus[1], -0.25);
  EXPECT_DOUBLE_EQ(t.b1_plus[2], -5.0 / 32.0);
  EXPECT_DOUBLE_EQ(t.b1_minus[2], 5.0 / 32.0);
  EXPECT_DOUBLE_EQ(t.b2_plus[2], 0.125);
  EXPECT_DOUBLE_EQ(t.b2_minus[2], -0.125);
}

TEST(CoeffTables, BranchesDifferBySignPattern) {
  const wkb::CoeffTables t = wkb::b_tables(30);
  EXPECT_EQ(t.b2_plus[1], 0.0);
  for (int n = 1; n <= 30; ++n) {
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    EXPECT_DOUBLE_EQ(t.b1_minus[n], sign * t.b1_plus[n]) << n;
    if (n >= 2) {
      EXPECT_DOUBLE_EQ(t.b2_plus[n], -0.4 * n * t.b1_plus[n]) << n;
    }
  }
}

TEST(CoeffTables, RejectsBadSize) {
  EXPECT_THROW(wkb::b_tables(0), DomainError);
  EXPECT_THROW(wkb::b_tables(41), DomainError);
}

TEST(AllowedCombos, MatchReference) {
  for (const AllowedRef& r : kAllowed) {
    const wkb::AllowedCombos c = wkb::allowed_combos(r.a);
    expect_rel(c.u, r.u, 1e-12, "u", r.a);
    expect_rel(c.w, r.w, 1e-13, "w", r.a);
    expect_rel(c.h2, r.h2, 1e-9, "h2", r.a);
    expect_rel(c.g2, r.g2, 1e-10, "g2", r.a);
  }
}

TEST(AllowedCombos, DerivativesFollowRiccati) {
  for (double a : {-0.3, -2.0, -7.0, -11.0, -25.0}) {
    const wkb::AllowedCombos c = wkb::allowed_combos(a);
    EXPECT_NEAR(c.du, a - c.u * c.u + c.w * c.w, 1e-12 * std::abs(a)) << a;
    EXPECT_NEAR(c.dw, -2.0 * c.u * c.w, 1e-13) << a;
  }
}

TEST(AllowedCombos, PathsAgreeInOverlap) {
  for (double a : {-10.0, -15.0, -30.0}) {
    const wkb::AllowedCombos x = wkb::allowed_combos(a, Path::airy);
    const wkb::AllowedCombos y = wkb::allowed_combos(a, Path::series);
    expect_rel(y.u, x.u, 1e-9, "u", a);
    expect_rel(y.w, x.w, 1e-9, "w", a);
    expect_rel(y.h2, x.h2, 1e-9, "h2", a);
    expect_rel(y.g2, x.g2, 1e-9, "g2", a);
  }
}

TEST(AllowedCombos, RejectsForbiddenSide) { EXPECT_THROW(wkb::allowed_combos(0.5), DomainError); }

TEST(ForbiddenCombos, MatchReference) {
  for (const ForbiddenRef& r : kForbidden) {
    const wkb::ForbiddenCombos c = wkb::forbidden_combos(r.a);
    expect_rel(c.y1m, r.y1m, 1e-13, "y1m", r.a);
    expect_rel(c.y2m, r.y2m, 1e-10, "y2m", r.a);
    expect_rel(c.y1p, r.y1p, 1e-13, "y1p", r.a);
    expect_rel(c.y2p, r.y2p, 1e-10, "y2p", r.a);
  }
}

TEST(ForbiddenCombos, PathsAgreeInOverlap) {
  for (double a : {10.0, 15.0, 30.0}) {
    const wkb::ForbiddenCombos x = wkb::forbidden_combos(a, Path::airy);
    const wkb::ForbiddenCombos y = wkb::forbidden_combos(a, Path::series);
    expect_rel(y.y1m, x.y1m, 1e-9, "y1m", a);
    expect_rel(y.y2m, x.y2m, 1e-9, "y2m", a);
  }
}

TEST(ClosedForm, TurningPointValue) {
  // at a = 0 the closed form reduces to -1/10
  EXPECT_DOUBLE_EQ(wkb::y2_closed_form(0.0, 0.37), -0.1);
}

TEST(DimensionlessA, Definition) {
  QBundle b;
  b.Q = -2.0;
  b.dQ = 8.0;
  EXPECT_NEAR(wkb::dimensionless_a(b, 1.0), -2.0 / 4.0, 1e-15);
  b.Q = 0.0;
  EXPECT_EQ(wkb::dimensionless_a(b, 1.0), 0.0);
  b.Q = 1.0;
  b.dQ = 0.0;
  EXPECT_THROW(wkb::dimensionless_a(b, 1.0), DomainError);
}

class HarmonicTerms : public ::testing::Test {
protected:
  PotentialModel pot = make_builtin(PotentialKind::harmonic, {{"k", 0.5}}, 1.0, 1.0);
  double E = 0.5;
};

TEST_F(HarmonicTerms, AllowedValuesMatchOracle) {
  const wkb::LogDerivTerms t = wkb::log_deriv_terms(q_bundle(pot, -1.0, E, 1.0), 1.0,
                                                     Region::allowed);
  EXPECT_NEAR(t.mean, -0.359248236, 1e-9);
  EXPECT_NEAR(t.phase, 0.795441278, 1e-9);
}

TEST_F(HarmonicTerms, PhaseAtMinimumIncludesSecondOrderTerm) {
  // sqrt(A)/hbar + Q'' hbar / (8 A^{3/2}) with A = 1, Q'' = 2
  const wkb::LogDerivTerms t = wkb::log_deriv_terms(q_bundle(pot, 0.0, E, 1.0), 1.0,
                                                     Region::allowed);
  EXPECT_NEAR(t.phase, 1.25, 1e-12);
  EXPECT_NEAR(t.mean, 0.0, 1e-15);
}

TEST_F(HarmonicTerms, ContinuousAcrossPathSwitch) {
  // locate |a| = kSeriesSwitch on the left of the minimum and straddle it
  double lo = -0.9, hi = -1e-3;
  auto a_of = [&](double q) { return wkb::dimensionless_a(q_bundle(pot, q, E, 1.0), 1.0); };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(a_of(mid)) < wkb::kSeriesSwitch ? lo : hi) = mid;
  }
  const auto left = wkb::log_deriv_terms(q_bundle(pot, lo, E, 1.0), 1.0, Region::allowed);
  const auto right = wkb::log_deriv_terms(q_bundle(pot, hi, E, 1.0), 1.0, Region::allowed);
  EXPECT_NEAR(left.phase, right.phase, 1e-10);
  EXPECT_NEAR(left.mean, right.mean, 1e-10);
}

TEST_F(HarmonicTerms, JetDerivativesMatchFiniteDifferences) {
  for (double q : {-0.9, -0.5, -0.05, 0.0, 0.3}) {
    const auto j = wkb::log_deriv_jet(q_bundle(pot, q, E, 1.0), 1.0, Region::allowed);
    const double h = 1e-5;
    const auto p = wkb::log_deriv_terms(q_bundle(pot, q + h, E, 1.0), 1.0, Region::allowed);
    const auto m = wkb::log_deriv_terms(q_bundle(pot, q - h, E, 1.0), 1.0, Region::allowed);
    EXPECT_NEAR(j.dmean, (p.mean - m.mean) / (2 * h), 1e-6) << q;
    EXPECT_NEAR(j.dphase, (p.phase - m.phase) / (2 * h), 1e-6) << q;
  }
}

TEST_F(HarmonicTerms, WrongRegionIsRejected) {
  EXPECT_THROW(wkb::log_deriv_terms(q_bundle(pot, 3.0, E, 1.0), 1.0, Region::allowed),
               DomainError);
  EXPECT_THROW(wkb::log_deriv_terms(q_bundle(pot, 0.0, E, 1.0), 1.0, Region::forbidden),
               DomainError);
}

TEST(Riccati, ExactForLinearPotential) {
  for (double k : {0.5, 2.0}) {
    const PotentialModel pot = parse_potential("k*q", {{"k", k}});
    for (double q : {0.01, 0.3, 1.0, 4.0, 12.0}) {
      EXPECT_LE(wkb::riccati_residual(q, 0.0, pot, 1.0, 1.0), 1e-8) << "k=" << k << " q=" << q;
    }
  }
}

TEST(Riccati, SecondOrderAccurateForCurvedWell) {
  const PotentialModel pot = make_builtin(PotentialKind::harmonic, {{"k", 0.5}}, 1.0, 1.0);
  // residual is small but not zero once Q'' != 0
  const double r = wkb::riccati_residual(4.0, 0.5, pot, 1.0, 1.0);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1e-3);
}

}  // namespace
