#include "uniwkb/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "uniwkb/error.hpp"

namespace uniwkb {

PotentialModel::PotentialModel(PotentialKind kind, ParamMap params, JetFunction jet,
                               std::string description, std::pair<double, double> window)
    : kind_(kind),
      params_(std::move(params)),
      jet_(std::move(jet)),
      description_(std::move(description)),
      window_(window) {}

PotentialModel PotentialModel::with_search_window(double lo, double hi) const {
  if (!(lo < hi)) throw DomainError("search window must satisfy lo < hi");
  PotentialModel copy = *this;
  copy.window_ = {lo, hi};
  return copy;
}

double PotentialModel::param(const std::string& name, const std::string& alias) const {
  if (auto it = params_.find(name); it != params_.end()) return it->second;
  if (!alias.empty()) {
    if (auto it = params_.find(alias); it != params_.end()) return it->second;
  }
  throw DomainError("missing parameter '" + name + "'");
}

namespace {

double lookup(const ParamMap& p, const std::string& name, const std::string& alias,
              double fallback = std::numeric_limits<double>::quiet_NaN()) {
  if (auto it = p.find(name); it != p.end()) return it->second;
  if (!alias.empty()) {
    if (auto it = p.find(alias); it != p.end()) return it->second;
  }
  if (std::isnan(fallback)) throw DomainError("missing parameter '" + name + "'");
  return fallback;
}

// sech^2(x) without overflow for large |x|
double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

std::string format_params(const ParamMap& p) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : p) {
    os << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace

PotentialKind parse_kind(const std::string& name) {
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "morse") return PotentialKind::morse;
  if (name == "poschl-teller" || name == "poschl_teller" || name == "pt") {
    return PotentialKind::poschl_teller;
  }
  if (name == "expr" || name == "expression") return PotentialKind::expression;
  throw DomainError("unknown potential kind '" + name + "'");
}

std::string kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::morse: return "morse";
    case PotentialKind::poschl_teller: return "poschl-teller";
    case PotentialKind::expression: return "expr";
    case PotentialKind::callable: return "callable";
  }
  return "unknown";
}

PotentialModel make_builtin(PotentialKind kind, const ParamMap& params, double hbar, double mass) {
  if (!(hbar > 0.0) || !(mass > 0.0)) throw DomainError("hbar and mass must be positive");
  switch (kind) {
    case PotentialKind::harmonic: {
      const double k = lookup(params, "k", "");
      if (!(k > 0.0)) throw DomainError("harmonic potential requires k > 0");
      const double omega = std::sqrt(2.0 * k / mass);
      const double length = std::sqrt(hbar / (mass * omega));
      auto jet = [k](double q) { return PotentialJet{k * q * q, 2.0 * k * q, 2.0 * k, 0.0}; };
      return {kind, {{"k", k}}, jet, "harmonic V = k q^2 (k=" + std::to_string(k) + ")",
              {-30.0 * length, 30.0 * length}};
    }
    case PotentialKind::morse: {
      const double g = lookup(params, "gamma", "g");
      const double alpha = lookup(params, "alpha", "a", 1.0);
      if (!(g > 0.5)) throw DomainError("morse potential requires gamma > 1/2");
      if (!(alpha > 0.0)) throw DomainError("morse potential requires alpha > 0");
      const double c = g * g * hbar * hbar * alpha * alpha / (2.0 * mass);
      auto jet = [c, alpha](double q) {
        const double e1 = std::exp(-alpha * q);
        const double e2 = e1 * e1;
        return PotentialJet{c * (e2 - 2.0 * e1), c * alpha * (2.0 * e1 - 2.0 * e2),
                            c * alpha * alpha * (4.0 * e2 - 2.0 * e1),
                            c * alpha * alpha * alpha * (2.0 * e1 - 8.0 * e2)};
      };
      ParamMap p{{"gamma", g}, {"alpha", alpha}};
      return {kind, p, jet, "morse (" + format_params(p) + ")", {-30.0 / alpha, 30.0 / alpha}};
    }
    case PotentialKind::poschl_teller: {
      const double l = lookup(params, "lambda", "l");
      const double alpha = lookup(params, "alpha", "a", 1.0);
      if (!(l > 1.0)) throw DomainError("poschl-teller potential requires lambda > 1");
      if (!(alpha > 0.0)) throw DomainError("poschl-teller potential requires alpha > 0");
      const double c = l * (l - 1.0) * hbar * hbar * alpha * alpha / (2.0 * mass);
      auto jet = [c, alpha](double q) {
        const double x = alpha * q;
        const double s = sech2(x);
        const double t = std::tanh(x);
        return PotentialJet{-c * s, 2.0 * c * alpha * s * t,
                            2.0 * c * alpha * alpha * (s * s - 2.0 * s * t * t),
                            8.0 * c * alpha * alpha * alpha * s * t * (t * t - 2.0 * s)};
      };
      ParamMap p{{"lambda", l}, {"alpha", alpha}};
      return {kind, p, jet, "poschl-teller (" + format_params(p) + ")",
              {-30.0 / alpha, 30.0 / alpha}};
    }
    case PotentialKind::expression:
    case PotentialKind::callable:
      break;
  }
  throw DomainError("make_builtin called with a non built-in kind");
}

PotentialModel parse_potential(const std::string& expr, const ParamMap& params) {
  auto parsed = std::make_shared<const Expression>(Expression::parse(expr, params));
  auto jet = [parsed](double q) {
    const Taylor<3> t = parsed->evaluate(Taylor<3>::variable(q));
    return PotentialJet{t.derivative(0), t.derivative(1), t.derivative(2), t.derivative(3)};
  };
  return {PotentialKind::expression, params, jet, "V(q) = " + expr, {-30.0, 30.0}};
}

PotentialModel from_function(std::function<double(double)> v, std::string description) {
  auto jet = [v = std::move(v)](double q) {
    const double h = 1e-3 * std::max(1.0, std::abs(q));
    const double f0 = v(q), p1 = v(q + h), m1 = v(q - h), p2 = v(q + 2 * h), m2 = v(q - 2 * h);
    PotentialJet j;
    j.v = f0;
    j.dv = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    j.d2v = (-m2 + 16.0 * m1 - 30.0 * f0 + 16.0 * p1 - p2) / (12.0 * h * h);
    j.d3v = (-m2 + 2.0 * m1 - 2.0 * p1 + p2) / (2.0 * h * h * h);
    return j;
  };
  return {PotentialKind::callable, {}, jet, std::move(description), {-30.0, 30.0}};
}

QBundle q_bundle(const PotentialModel& potential, double q, double E, double mass) {
  const PotentialJet j = potential.eval(q);
  const double s = 2.0 * mass;
  return {q, s * (j.v - E), s * j.dv, s * j.d2v, s * j.d3v};
}

double find_minimum(const PotentialModel& potential) {
  const auto [lo, hi] = potential.search_window();
  constexpr int kSamples = 4001;
  std::vector<double> qs(kSamples), vs(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    qs[i] = lo + (hi - lo) * i / (kSamples - 1);
    double v = potential.value(qs[i]);
    vs[i] = std::isfinite(v) ? v : std::numeric_limits<double>::max();
  }
  std::vector<int> minima;
  for (int i = 1; i + 1 < kSamples; ++i) {
    if (vs[i] < vs[i - 1] && vs[i] <= vs[i + 1]) minima.push_back(i);
  }
  if (minima.empty()) throw DomainError("no interior minimum in the search window");
  if (minima.size() > 1) {
    throw DomainError("potential has " + std::to_string(minima.size()) +
                      " minima in the search window; only single wells are supported");
  }
  // bisection on V' inside the bracketing samples
  double a = qs[minima[0] - 1], b = qs[minima[0] + 1];
  double fa = potential.eval(a).dv;
  if (fa >= 0.0) return a;
  if (potential.eval(b).dv <= 0.0) return b;
  for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() *
                                             std::max(1.0, std::abs(a) + std::abs(b));
       ++it) {
    const double m = 0.5 * (a + b);
    const double fm = potential.eval(m).dv;
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double well_top(const PotentialModel& potential) {
  const auto [lo, hi] = potential.search_window();
  return std::min(potential.value(lo), potential.value(hi));
}

namespace {

// Root of Q between an allowed point `in` (Q < 0) and a forbidden point `out`.
double refine_root(const PotentialModel& potential, double E, double mass, double in, double out) {
  auto Q = [&](double q) { return q_bundle(potential, q, E, mass).Q; };
  double a = in, b = out;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  for (int it = 0; it < 300; ++it) {
    if (std::abs(b - a) <= 2.0 * std::numeric_limits<double>::epsilon() * scale) break;
    const double m = 0.5 * (a + b);
    if (Q(m) < 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  // Newton polish, kept only if it stays inside the final bracket
  double x = 0.5 * (a + b);
  const QBundle qb = q_bundle(potential, x, E, mass);
  if (qb.dQ != 0.0) {
    const double y = x - qb.Q / qb.dQ;
    if ((y - a) * (y - b) <= 0.0) x = y;
  }
  return x;
}

}  // namespace

TurningPoints find_turning_points(const PotentialModel& potential, double E, double mass) {
  return find_turning_points(potential, E, mass, find_minimum(potential));
}

TurningPoints find_turning_points(const PotentialModel& potential, double E, double mass,
                                  double q_min) {
  const double vmin = potential.value(q_min);
  if (!(E > vmin)) {
    throw NoBoundStateError("energy does not exceed the potential minimum (no allowed region)");
  }
  const auto [lo, hi] = potential.search_window();
  auto Q = [&](double q) { return q_bundle(potential, q, E, mass).Q; };
  auto bracket = [&](double direction) {
    double step = (hi - lo) * 1e-5;
    double inner = q_min;
    for (;;) {
      double outer = q_min + direction * step;
      if (outer < lo || outer > hi) {
        outer = direction < 0 ? lo : hi;
        if (!(Q(outer) > 0.0)) {
          throw NoBoundStateError("Q stays negative up to the search window edge; "
                                  "energy above the well top");
        }
        return std::pair{inner, outer};
      }
      if (Q(outer) > 0.0) return std::pair{inner, outer};
      inner = outer;
      step *= 2.0;
    }
  };
  const auto [li, lo_out] = bracket(-1.0);
  const auto [ri, hi_out] = bracket(1.0);
  TurningPoints tp;
  tp.q_m = q_min;
  tp.q_minus = refine_root(potential, E, mass, li, lo_out);
  tp.q_plus = refine_root(potential, E, mass, ri, hi_out);
  return tp;
}

double decay_extent(const PotentialModel& potential, double E, double mass, double hbar,
                    double q_turn, int direction, double cutoff) {
  const auto [lo, hi] = potential.search_window();
  const double dir = direction < 0 ? -1.0 : 1.0;
  const double edge = dir < 0 ? lo : hi;
  auto root_q = [&](double q) { return std::sqrt(std::max(q_bundle(potential, q, E, mass).Q, 0.0)); };
  const double dq = std::abs(q_bundle(potential, q_turn, E, mass).dQ);
  double step = dq > 0.0 ? 0.25 * std::cbrt(hbar * hbar / dq) : 1e-3 * (hi - lo);
  double x = q_turn, acc = 0.0;
  for (int it = 0; it < 10000; ++it) {
    double next = x + dir * step;
    if ((next - edge) * dir >= 0.0) return edge;
    acc += step * (root_q(x) + 4.0 * root_q(0.5 * (x + next)) + root_q(next)) / (6.0 * hbar);
    x = next;
    if (acc >= cutoff) return x;
    step *= 1.25;
  }
  return edge;
}

}  // namespace uniwkb
