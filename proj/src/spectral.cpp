#include "uniwkb/spectral.hpp"

#include <cmath>

#include "uniwkb/error.hpp"
#include "uniwkb/wkb_core.hpp"

namespace uniwkb {

using wkb::Region;

namespace {

constexpr double kMomentRelTol = 1e-10;

QuadratureSpec moment_spec(const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  s.rel_tol = std::max(spec.rel_tol, kMomentRelTol);
  return s;
}

double phase_between(const PotentialModel& potential, const TurningPoints& tp, double E,
                     double hbar, double mass, const QuadratureSpec& spec) {
  auto phase = [&](double q) {
    return wkb::log_deriv_terms(q_bundle(potential, q, E, mass), hbar, Region::allowed).phase;
  };
  return integrate(phase, tp.q_minus, tp.q_m, spec).value +
         integrate(phase, tp.q_m, tp.q_plus, spec).value;
}

double oscillator_scale(const PotentialModel& potential, double q_min, double hbar, double mass) {
  const double curvature = potential.eval(q_min).d2v;
  return curvature > 0.0 ? hbar * std::sqrt(curvature / mass) : 1.0;
}

}  // namespace

double phase_integral(const PotentialModel& potential, double E, double hbar, double mass,
                      const QuadratureSpec& spec) {
  const TurningPoints tp = find_turning_points(potential, E, mass);
  return phase_between(potential, tp, E, hbar, mass, spec);
}

double solve_quantization(const PotentialModel& potential, int n, double hbar, double mass,
                          const QuadratureSpec& spec) {
  if (n < 0) throw DomainError("level index must be non-negative");
  const double q_min = find_minimum(potential);
  const double vmin = potential.value(q_min);
  const double top = well_top(potential);
  const double scale = oscillator_scale(potential, q_min, hbar, mass);
  const double target = M_PI * (n + 2.0 / 3.0);
  auto F = [&](double E) {
    const TurningPoints tp = find_turning_points(potential, E, mass, q_min);
    return phase_between(potential, tp, E, hbar, mass, spec) - target;
  };
  const double ceiling = top - 1e-9 * (top - vmin);
  double lo = vmin + 1e-3 * std::min(scale, top - vmin);
  if (F(lo) >= 0.0) {
    throw NoBoundStateError("quantization condition has no root above the well bottom");
  }
  double hi = std::min(vmin + scale * (n + 1.0), ceiling);
  for (;;) {
    double f_hi;
    try {
      f_hi = F(hi);
    } catch (const NoBoundStateError&) {
      f_hi = -1.0;  // turning points not resolvable this close to the top
    }
    if (f_hi > 0.0) break;
    if (hi >= ceiling) {
      throw NoBoundStateError("level " + std::to_string(n) +
                              " is not supported below the well top");
    }
    if (f_hi < 0.0) lo = hi;
    hi = std::min(vmin + 2.0 * (hi - vmin), ceiling);
  }
  return brent_root(F, lo, hi, 1e-14 * scale, 1e-15);
}

ApproxWavefunction::ApproxWavefunction(PotentialModel potential, double E, int n, double hbar,
                                       double mass, const QuadratureSpec& spec)
    : potential_(std::move(potential)),
      energy_(E),
      n_(n),
      hbar_(hbar),
      mass_(mass),
      spec_(spec) {
  tp_ = find_turning_points(potential_, E, mass);
  auto forbidden = [this](double q) {
    return wkb::log_deriv_terms(q_bundle(potential_, q, energy_, mass_), hbar_, Region::forbidden)
        .mean;
  };
  auto mean = [this](double q) {
    return wkb::log_deriv_terms(q_bundle(potential_, q, energy_, mass_), hbar_, Region::allowed)
        .mean;
  };
  auto phase = [this](double q) {
    return wkb::log_deriv_terms(q_bundle(potential_, q, energy_, mass_), hbar_, Region::allowed)
        .phase;
  };
  q_left_ = tail_end(-1);
  q_right_ = tail_end(+1);
  left_ = CumulativeIntegral(forbidden, q_left_, tp_.q_minus, spec_);
  mean_ = CumulativeIntegral(mean, tp_.q_minus, tp_.q_plus, spec_, {tp_.q_m});
  phase_ = CumulativeIntegral(phase, tp_.q_minus, tp_.q_plus, spec_, {tp_.q_m});
  right_ = CumulativeIntegral(forbidden, tp_.q_plus, q_right_, spec_);

  c_ = 1.0;
  const std::vector<double> cuts = breakpoints();
  double norm2 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    norm2 += integrate(
                 [this](double q) {
                   const double p = sample(q).psi;
                   return p * p;
                 },
                 cuts[i], cuts[i + 1], spec_)
                 .value;
  }
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw ConvergenceError("wavefunction normalization failed");
  }
  c_ = 1.0 / std::sqrt(norm2);
}

// Steps outward from a turning point until the forbidden-region exponent
// reaches the cutoff, using Gauss-Legendre panels of growing width.
double ApproxWavefunction::tail_end(int direction) const {
  const auto [lo, hi] = potential_.search_window();
  const double edge = direction < 0 ? lo : hi;
  const double start = direction < 0 ? tp_.q_minus : tp_.q_plus;
  const double dq = std::abs(q_bundle(potential_, start, energy_, mass_).dQ);
  double step = 0.25 * std::cbrt(hbar_ * hbar_ / dq);
  const GaussRule& g = gauss_legendre_20();
  double x = start, acc = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const double next = x + direction * step;
    if ((next - edge) * direction >= 0.0) return edge;
    const double c = 0.5 * (x + next), h = 0.5 * (next - x);
    double s = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const QBundle b = q_bundle(potential_, c + h * g.nodes[k], energy_, mass_);
      s += g.weights[k] * wkb::log_deriv_terms(b, hbar_, Region::forbidden).mean;
    }
    acc += std::abs(s * h);
    x = next;
    if (acc >= spec_.tail_decay_cutoff) return x;
    step *= 1.25;
  }
  return edge;
}

std::vector<double> ApproxWavefunction::breakpoints() const {
  return {q_left_, tp_.q_minus, tp_.q_m, tp_.q_plus, q_right_};
}

Piece ApproxWavefunction::piece_of(double q) const {
  if (q < tp_.q_minus) return Piece::left;
  if (q > tp_.q_plus) return Piece::right;
  return Piece::middle;
}

double ApproxWavefunction::envelope(double q) const { return c_ * std::exp(mean_(q)); }

WaveSample ApproxWavefunction::sample(double q) const {
  if (q < q_left_ || q > q_right_) return {};
  return sample(q, piece_of(q));
}

WaveSample ApproxWavefunction::sample(double q, Piece piece) const {
  const QBundle b = q_bundle(potential_, q, energy_, mass_);
  const double v = potential_.value(q);
  const double k = hbar_ * hbar_ / (2.0 * mass_);
  WaveSample s;
  if (piece == Piece::middle) {
    const wkb::LogDerivJet y = wkb::log_deriv_jet(b, hbar_, Region::allowed);
    const double amp = c_ * std::exp(mean_(q));
    const double theta = phase_(q) - M_PI / 3.0;
    const double cs = std::cos(theta), sn = std::sin(theta);
    // psi = Re(amp e^{i theta}); psi'' = Re((Y' + Y^2) psi) with Y = mean + i phase
    const double kr = v - k * (y.dmean + y.mean * y.mean - y.phase * y.phase);
    const double ki = -k * (y.dphase + 2.0 * y.mean * y.phase);
    s.psi = amp * cs;
    s.dpsi = amp * (y.mean * cs - y.phase * sn);
    s.h_psi = amp * (kr * cs - ki * sn);
    return s;
  }
  const wkb::LogDerivJet y = wkb::log_deriv_jet(b, hbar_, Region::forbidden);
  if (piece == Piece::left) {
    s.psi = 0.5 * c_ * std::exp(left_(q) - left_.total());
  } else {
    const double sign = (n_ % 2 == 0) ? 1.0 : -1.0;
    s.psi = sign * 0.5 * c_ * std::exp(right_(q) + mean_.total());
  }
  s.dpsi = y.mean * s.psi;
  s.h_psi = (v - k * (y.dmean + y.mean * y.mean)) * s.psi;
  return s;
}

namespace {

// Integrates {psi'^2 k + V psi^2, (H psi)^2} over the support.
std::array<double, 2> moments(const ApproxWavefunction& wave, const QuadratureSpec& spec) {
  const double k = wave.hbar() * wave.hbar() / (2.0 * wave.mass());
  const std::vector<double> cuts = wave.breakpoints();
  std::array<double, 2> total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const std::vector<double> part = integrate_vector(
        [&](double q, double* out) {
          const WaveSample s = wave.sample(q);
          out[0] = k * s.dpsi * s.dpsi + wave.potential().value(q) * s.psi * s.psi;
          out[1] = s.h_psi * s.h_psi;
        },
        2, cuts[i], cuts[i + 1], spec);
    total[0] += part[0];
    total[1] += part[1];
  }
  return total;
}

}  // namespace

double expectation_h(const ApproxWavefunction& wave, const QuadratureSpec& spec) {
  return moments(wave, moment_spec(spec))[0];
}

double expectation_h(const EigenSolution& solution) { return solution.e_bar; }

double expectation_h2(const ApproxWavefunction& wave, const QuadratureSpec& spec) {
  return moments(wave, moment_spec(spec))[1];
}

double expectation_h2(const EigenSolution& solution) { return solution.h2; }

EigenSolution assemble(const PotentialModel& potential, double E, int n, double hbar, double mass,
                       const QuadratureSpec& spec) {
  auto wave = std::make_shared<const ApproxWavefunction>(potential, E, n, hbar, mass, spec);
  const std::array<double, 2> m = moments(*wave, moment_spec(spec));
  EigenSolution s;
  s.n = n;
  s.e_sp = E;
  s.e_bar = m[0];
  s.h2 = m[1];
  s.norm_c = wave->norm_c();
  s.turning = wave->turning();
  s.wave = wave;
  s.psi = [wave](double q) { return wave->sample(q).psi; };
  s.dpsi = [wave](double q) { return wave->sample(q).dpsi; };
  s.h_psi = [wave](double q) { return wave->sample(q).h_psi; };
  return s;
}

EigenSolution solve_level(const PotentialModel& potential, int n, double hbar, double mass,
                          const QuadratureSpec& spec) {
  const double e_sp = solve_quantization(potential, n, hbar, mass, spec);
  return assemble(potential, e_sp, n, hbar, mass, spec);
}

ContinuityReport continuity(const ApproxWavefunction& wave) {
  ContinuityReport r;
  auto mismatch = [&](double q, Piece outer, double& dpsi_out) {
    const WaveSample in = wave.sample(q, Piece::middle);
    const WaveSample out = wave.sample(q, outer);
    const wkb::LogDerivJet y = wkb::log_deriv_jet(
        q_bundle(wave.potential(), q, wave.energy(), wave.mass()), wave.hbar(), Region::allowed);
    const double envelope = wave.envelope(q);
    const double slope_scale = envelope * std::hypot(y.mean, y.phase);
    dpsi_out = std::abs(in.dpsi - out.dpsi) / slope_scale;
    return std::abs(in.psi - out.psi) / envelope;
  };
  r.psi_left = mismatch(wave.turning().q_minus, Piece::left, r.dpsi_left);
  r.psi_right = mismatch(wave.turning().q_plus, Piece::right, r.dpsi_right);
  return r;
}

int count_nodes(const ApproxWavefunction& wave, int samples) {
  const double a = wave.turning().q_minus, b = wave.turning().q_plus;
  int nodes = 0;
  double prev = wave.sample(a, Piece::middle).psi;
  for (int i = 1; i <= samples; ++i) {
    const double q = a + (b - a) * i / samples;
    const double cur = wave.sample(q, Piece::middle).psi;
    if ((cur < 0.0) != (prev < 0.0)) ++nodes;
    prev = cur;
  }
  return nodes;
}

}  // namespace uniwkb
