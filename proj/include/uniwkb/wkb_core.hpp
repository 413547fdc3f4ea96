#pragma once

// Second-order uniform WKB log-derivatives.
//
// With Q = 2m(V - E) and a = Q / (hbar |Q'|)^{2/3}, the approximate
// log-derivative of a Schrodinger solution is
//
//   Y = hbar^{-2/3} Q'|Q'|^{-2/3} y1(a) + (Q''/Q') y2(a)
//
// where y1 solves y1' + y1^2 = a (an Airy log-derivative) and y2 is the
// algebraic closed form y2 = (-8a^2 y1^2 - 4a y1 + 8a^3 - 3)/30.
//
// In the allowed region (a <= 0) the two complex branches are handled in
// real form: with m2 = Ai^2 + Bi^2,
//   u  = Re y1 = m2'/(2 m2),   w  = Im y1 = 1/(pi m2),
//   h2 = Re y2,                g2 = Im y2.
// In the forbidden region (a >= 0) the decaying branch y1 = Ai'/Ai is used.
//
// For |a| >= kSeriesSwitch the closed forms cancel badly, and at the well
// minimum a is infinite while the prefactors vanish. There the terms are
// evaluated from the truncated large-|a| series written directly in Q,
// which is smooth through Q' = 0.

#include <vector>

#include "uniwkb/potential.hpp"
#include "uniwkb/taylor.hpp"

namespace uniwkb::wkb {

/// |a| at and above which the series replaces the Airy closed forms.
inline constexpr double kSeriesSwitch = 10.0;
/// Number of series terms kept on the series path.
inline constexpr int kSeriesTerms = 20;

/// Coefficients of the large-|a| expansions
///   y1(+/-) ~ +/- a^{1/2} + sum_{n>=1} B(+/-)_{n,1} a^{(1-3n)/2}
///   y2(+/-) ~             sum_{n>=2} B(+/-)_{n,2} a^{(3-3n)/2}
/// Vectors are indexed by n; entry 0 is unused (and B_{1,2} is zero).
struct CoeffTables {
  int n_max = 0;
  std::vector<double> b1_plus;
  std::vector<double> b1_minus;
  std::vector<double> b2_plus;
  std::vector<double> b2_minus;
};

/// Requires 1 <= n_max <= 40.
CoeffTables b_tables(int n_max);

/// Shared tables with n_max = kSeriesTerms.
const CoeffTables& default_tables();

/// a = Q / (hbar^{2/3} |Q'|^{2/3}). Returns 0 when Q = 0; throws DomainError
/// when Q' = 0 and Q != 0 (a is infinite there).
double dimensionless_a(const QBundle& b, double hbar);

/// Evaluation path for the combos. `automatic` uses Airy functions below
/// kSeriesSwitch and the series at or above it.
enum class Path { automatic, airy, series };

/// Real-form branch values in the allowed region, with a-derivatives.
struct AllowedCombos {
  double a = 0.0;
  double u = 0.0;
  double w = 0.0;
  double h2 = 0.0;
  double g2 = 0.0;
  double du = 0.0;
  double dw = 0.0;
  double dh2 = 0.0;
  double dg2 = 0.0;
};

/// Forbidden-region branch values (m: decaying Ai branch, p: growing Bi
/// branch) with a-derivatives of the decaying branch.
struct ForbiddenCombos {
  double a = 0.0;
  double y1m = 0.0;
  double y1p = 0.0;
  double y2m = 0.0;
  double y2p = 0.0;
  double dy1m = 0.0;
  double dy2m = 0.0;
};

/// Throws DomainError for a > 0.
AllowedCombos allowed_combos(double a, Path path = Path::automatic);

/// Throws DomainError for a < 0.
ForbiddenCombos forbidden_combos(double a, Path path = Path::automatic);

/// (-8a^2 y1^2 - 4a y1 + 8a^3 - 3)/30 in plain double arithmetic.
double y2_closed_form(double a, double y1);

enum class Region { allowed, forbidden };

/// mean: Re of the log-derivative (allowed) or the decaying log-derivative
/// (forbidden). phase: the oscillation rate, zero in the forbidden region.
struct LogDerivTerms {
  double mean = 0.0;
  double phase = 0.0;
};

/// LogDerivTerms together with their q-derivatives (needs Q''').
struct LogDerivJet {
  double mean = 0.0;
  double phase = 0.0;
  double dmean = 0.0;
  double dphase = 0.0;
};

/// Values of a within this distance of zero on the wrong side of a turning
/// point are treated as the turning point itself.
inline constexpr double kTurningSlack = 1e-6;

/// Throws DomainError when the bundle lies clearly in the other region, or
/// when Q and Q' vanish together.
LogDerivTerms log_deriv_terms(const QBundle& b, double hbar, Region region);
LogDerivJet log_deriv_jet(const QBundle& b, double hbar, Region region);

/// |Y' + Y^2 - Q/hbar^2| / (|Q|/hbar^2) for the decaying forbidden-region
/// log-derivative, with Y' from a five-point central difference.
double riccati_residual(double q, double E, const PotentialModel& potential, double hbar,
                        double mass);

}  // namespace uniwkb::wkb
