#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "uniwkb/expression.hpp"

namespace uniwkb {

enum class PotentialKind { harmonic, morse, poschl_teller, expression, callable };

/// V and its first three derivatives at a point.
struct PotentialJet {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
  double d3v = 0.0;
};

/// Q = 2m(V - E) and its first three q-derivatives at q.
struct QBundle {
  double q = 0.0;
  double Q = 0.0;
  double dQ = 0.0;
  double d2Q = 0.0;
  double d3Q = 0.0;
};

/// Classical turning points around the single minimum q_m.
struct TurningPoints {
  double q_minus = 0.0;
  double q_plus = 0.0;
  double q_m = 0.0;
};

/// An immutable single-well potential V(q) with derivatives to third order.
///
/// Built-ins:
///   harmonic       V = k q^2                                   (param k)
///   morse          V = g^2 hbar^2 alpha^2/(2m) (e^{-2 alpha q} - 2 e^{-alpha q})
///                                                   (params gamma|g, alpha)
///   poschl_teller  V = -l(l-1) hbar^2 alpha^2 / (2m cosh^2(alpha q))
///                                                   (params lambda|l, alpha)
/// The Poschl-Teller well is taken attractive; with a positive coefficient
/// the potential is a barrier without bound states.
class PotentialModel {
public:
  using JetFunction = std::function<PotentialJet(double)>;

  PotentialModel(PotentialKind kind, ParamMap params, JetFunction jet, std::string description,
                 std::pair<double, double> window);

  PotentialKind kind() const { return kind_; }
  const ParamMap& params() const { return params_; }
  const std::string& description() const { return description_; }

  PotentialJet eval(double q) const { return jet_(q); }
  double value(double q) const { return jet_(q).v; }

  /// Interval searched for the minimum and for turning-point brackets.
  std::pair<double, double> search_window() const { return window_; }
  PotentialModel with_search_window(double lo, double hi) const;

  /// Parameter lookup accepting aliases; throws DomainError when absent and no default.
  double param(const std::string& name, const std::string& alias = "") const;

private:
  PotentialKind kind_;
  ParamMap params_;
  JetFunction jet_;
  std::string description_;
  std::pair<double, double> window_;
};

/// Throws DomainError on parameter domain violations
/// (k > 0; gamma > 1/2; lambda > 1; alpha > 0).
PotentialModel make_builtin(PotentialKind kind, const ParamMap& params, double hbar, double mass);

/// Parses an expression in q; derivatives come from degree-3 Taylor arithmetic.
PotentialModel parse_potential(const std::string& expr, const ParamMap& params = {});

/// Wraps a plain callable; derivatives come from central differences.
PotentialModel from_function(std::function<double(double)> v, std::string description = "callable");

PotentialKind parse_kind(const std::string& name);
std::string kind_name(PotentialKind kind);

QBundle q_bundle(const PotentialModel& potential, double q, double E, double mass);

/// Location of the single interior minimum in the search window.
/// Throws DomainError when there is none or more than one.
double find_minimum(const PotentialModel& potential);

/// Top of the bound-state window: min(V) over the two window edges.
double well_top(const PotentialModel& potential);

/// Throws NoBoundStateError when E <= V(q_m) or when Q does not turn positive
/// inside the search window on either side.
TurningPoints find_turning_points(const PotentialModel& potential, double E, double mass);
TurningPoints find_turning_points(const PotentialModel& potential, double E, double mass,
                                  double q_min);

/// Point beyond the turning point q_turn (direction -1 or +1) where the
/// decay exponent int sqrt(Q)/hbar measured from q_turn reaches `cutoff`.
/// Clamped to the search window.
double decay_extent(const PotentialModel& potential, double E, double mass, double hbar,
                    double q_turn, int direction, double cutoff);

}  // namespace uniwkb
