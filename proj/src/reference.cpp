#include "uniwkb/reference.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "uniwkb/error.hpp"
#include "uniwkb/quadrature.hpp"

namespace uniwkb {

namespace {

constexpr double kSupportDecay = 50.0;

void require_builtin(PotentialKind kind) {
  if (kind == PotentialKind::expression || kind == PotentialKind::callable) {
    throw DomainError("closed-form solutions exist only for the built-in wells");
  }
}

void require_level(PotentialKind kind, const ParamMap& params, int n) {
  if (n < 0 || n >= bound_count(kind, params)) {
    throw DomainError("level " + std::to_string(n) + " is not bound for " + kind_name(kind));
  }
}

// log cosh without overflow
double log_cosh(double y) {
  const double ay = std::abs(y);
  return ay + std::log1p(std::exp(-2.0 * ay)) - M_LN2;
}

// Physicists' Hermite H_n and H_{n-1} at x.
std::pair<double, double> hermite(int n, double x) {
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double laguerre(int n, double alpha, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer(int n, double lambda, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * lambda * x;
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * x * (k + lambda) * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

struct Shape {
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
};

Shape raw_shape(const PotentialModel& model, int n, double hbar, double mass) {
  switch (model.kind()) {
    case PotentialKind::harmonic: {
      const double omega = std::sqrt(2.0 * model.param("k") / mass);
      const double beta = std::sqrt(mass * omega / hbar);
      auto psi = [=](double q) {
        const double x = beta * q;
        return hermite(n, x).first * std::exp(-0.5 * x * x);
      };
      auto dpsi = [=](double q) {
        const double x = beta * q;
        const auto [h, hm1] = hermite(n, x);
        return beta * (2.0 * n * hm1 - x * h) * std::exp(-0.5 * x * x);
      };
      return {psi, dpsi};
    }
    case PotentialKind::morse: {
      const double g = model.param("gamma");
      const double alpha = model.param("alpha");
      const double s = g - n - 0.5;
      // envelope xi^s e^{-xi/2} with xi = 2 gamma e^{-alpha q}
      auto envelope = [=](double q, double& xi) {
        xi = 2.0 * g * std::exp(-alpha * q);
        return std::exp(s * std::log(xi) - 0.5 * xi);
      };
      auto psi = [=](double q) {
        double xi;
        const double env = envelope(q, xi);
        return env == 0.0 ? 0.0 : env * laguerre(n, 2.0 * s, xi);
      };
      auto dpsi = [=](double q) {
        double xi;
        const double env = envelope(q, xi);
        if (env == 0.0) return 0.0;
        const double l = laguerre(n, 2.0 * s, xi);
        const double dl = -laguerre(n - 1, 2.0 * s + 1.0, xi);
        const double dpsi_dxi = env * ((s / xi - 0.5) * l + dl);
        return -alpha * xi * dpsi_dxi;
      };
      return {psi, dpsi};
    }
    case PotentialKind::poschl_teller: {
      const double l = model.param("lambda");
      const double alpha = model.param("alpha");
      const double s = l - 1.0 - n;
      const double lam = s + 0.5;
      auto psi = [=](double q) {
        const double y = alpha * q;
        return std::exp(-s * log_cosh(y)) * gegenbauer(n, lam, std::tanh(y));
      };
      auto dpsi = [=](double q) {
        const double y = alpha * q;
        const double t = std::tanh(y);
        const double env = std::exp(-s * log_cosh(y));
        const double sech2 = 1.0 - t * t;
        const double c = gegenbauer(n, lam, t);
        const double dc = 2.0 * lam * gegenbauer(n - 1, lam + 1.0, t);
        return alpha * env * (-s * t * c + sech2 * dc);
      };
      return {psi, dpsi};
    }
    case PotentialKind::expression:
    case PotentialKind::callable:
      break;
  }
  throw DomainError("closed-form solutions exist only for the built-in wells");
}

}  // namespace

int bound_count(PotentialKind kind, const ParamMap& params) {
  require_builtin(kind);
  const PotentialModel model = make_builtin(kind, params, 1.0, 1.0);
  switch (kind) {
    case PotentialKind::harmonic: return kUnboundedLevels;
    case PotentialKind::morse: return static_cast<int>(std::ceil(model.param("gamma") - 0.5));
    case PotentialKind::poschl_teller: return static_cast<int>(std::ceil(model.param("lambda") - 1.0));
    default: break;
  }
  return 0;
}

double exact_energy(PotentialKind kind, const ParamMap& params, int n, double hbar, double mass) {
  require_builtin(kind);
  require_level(kind, params, n);
  const PotentialModel model = make_builtin(kind, params, hbar, mass);
  switch (kind) {
    case PotentialKind::harmonic:
      return hbar * std::sqrt(2.0 * model.param("k") / mass) * (n + 0.5);
    case PotentialKind::morse: {
      const double alpha = model.param("alpha");
      const double s = model.param("gamma") - n - 0.5;
      return -hbar * hbar * alpha * alpha / (2.0 * mass) * s * s;
    }
    case PotentialKind::poschl_teller: {
      const double alpha = model.param("alpha");
      const double s = model.param("lambda") - 1.0 - n;
      return -hbar * hbar * alpha * alpha / (2.0 * mass) * s * s;
    }
    default: break;
  }
  return 0.0;
}

ExactLevel exact_wavefunction(PotentialKind kind, const ParamMap& params, int n, double hbar,
                              double mass) {
  require_builtin(kind);
  require_level(kind, params, n);
  const PotentialModel model = make_builtin(kind, params, hbar, mass);
  const double energy = exact_energy(kind, params, n, hbar, mass);
  const Shape shape = raw_shape(model, n, hbar, mass);

  const TurningPoints tp = find_turning_points(model, energy, mass);
  const double lo = decay_extent(model, energy, mass, hbar, tp.q_minus, -1, kSupportDecay);
  const double hi = decay_extent(model, energy, mass, hbar, tp.q_plus, +1, kSupportDecay);
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  auto sq = [&](double q) {
    const double p = shape.psi(q);
    return p * p;
  };
  const double norm2 = integrate(sq, lo, tp.q_minus, spec).value +
                       integrate(sq, tp.q_minus, tp.q_m, spec).value +
                       integrate(sq, tp.q_m, tp.q_plus, spec).value +
                       integrate(sq, tp.q_plus, hi, spec).value;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw ConvergenceError("exact wavefunction normalization failed");
  }
  // no nodes in the forbidden region, so the sign just left of q_minus is the tail sign
  const double ell = std::cbrt(hbar * hbar / std::abs(q_bundle(model, tp.q_minus, energy, mass).dQ));
  const double tail_sign = shape.psi(tp.q_minus - ell) < 0.0 ? -1.0 : 1.0;
  const double c = tail_sign / std::sqrt(norm2);

  ExactLevel level;
  level.n = n;
  level.energy = energy;
  level.psi = [psi = shape.psi, c](double q) { return c * psi(q); };
  level.dpsi = [dpsi = shape.dpsi, c](double q) { return c * dpsi(q); };
  level.support_lo = lo;
  level.support_hi = hi;
  return level;
}

namespace {

// Sign changes of the Numerov solution started from a zero at the left end.
int numerov_nodes(const PotentialModel& potential, double E, double hbar, double mass,
                  double q_min, const NumerovSpec& spec) {
  TurningPoints tp;
  try {
    tp = find_turning_points(potential, E, mass, q_min);
  } catch (const NoBoundStateError&) {
    return std::numeric_limits<int>::max();
  }
  const double lo = decay_extent(potential, E, mass, hbar, tp.q_minus, -1, spec.tail_decay);
  const double hi = decay_extent(potential, E, mass, hbar, tp.q_plus, +1, spec.tail_decay);
  auto f = [&](double q) { return q_bundle(potential, q, E, mass).Q / (hbar * hbar); };
  double fmax = std::max({std::abs(f(lo)), std::abs(f(hi)), std::abs(f(q_min))});
  const double h0 = std::sqrt(spec.step_factor / fmax);
  const long steps = std::max(100L, static_cast<long>(std::ceil((hi - lo) / h0)));
  const double h = (hi - lo) / steps;
  const double c = h * h / 12.0;
  double y0 = 0.0, y1 = 1e-10;
  double w0 = 1.0 - c * f(lo);
  double f1 = f(lo + h);
  double w1 = 1.0 - c * f1;
  int nodes = 0;
  for (long i = 1; i < steps; ++i) {
    const double f2 = f(lo + (i + 1) * h);
    const double w2 = 1.0 - c * f2;
    const double y2 = ((12.0 - 10.0 * w1) * y1 - w0 * y0) / w2;
    if (i + 1 < steps && ((y2 < 0.0) != (y1 < 0.0))) ++nodes;
    y0 = y1;
    y1 = y2;
    w0 = w1;
    w1 = w2;
    if (std::abs(y1) > 1e150) {
      y0 *= 1e-150;
      y1 *= 1e-150;
    }
  }
  return nodes;
}

}  // namespace

double numerov_solve(const PotentialModel& potential, int n, double hbar, double mass,
                     const NumerovSpec& spec) {
  if (n < 0) throw DomainError("level index must be non-negative");
  const double q_min = find_minimum(potential);
  const double vmin = potential.value(q_min);
  const double top = well_top(potential);
  const double omega = std::sqrt(std::max(potential.eval(q_min).d2v, 0.0) / mass);
  const double scale = omega > 0.0 ? hbar * omega : 1.0;
  auto count = [&](double E) { return numerov_nodes(potential, E, hbar, mass, q_min, spec); };

  double lo = vmin;
  double hi = std::min(vmin + scale * (n + 1.0), top);
  while (count(hi) <= n) {
    if (hi >= top) {
      throw NoBoundStateError("level " + std::to_string(n) + " lies above the well top");
    }
    hi = std::min(vmin + 2.0 * (hi - vmin), top);
  }
  for (int it = 0; it < spec.max_iter; ++it) {
    if (hi - lo <= spec.rel_tol * (std::abs(hi) + scale)) {
      if (count(hi) == std::numeric_limits<int>::max()) {
        throw NoBoundStateError("level " + std::to_string(n) + " lies above the well top");
      }
      return 0.5 * (lo + hi);
    }
    const double mid = 0.5 * (lo + hi);
    if (count(mid) >= n + 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw ConvergenceError("Numerov bisection did not converge");
}

}  // namespace uniwkb
