#pragma once

// Quantization, piecewise wavefunction assembly and energy moments.
//
// The approximate eigenfunction at energy E is built from three pieces
// matched at the turning points q- < q+:
//
//   q < q-        psi = (C/2) exp(-int_q^{q-} Yf)
//   q- < q < q+   psi = C exp(int_{q-}^q mean) cos(int_{q-}^q phase - pi/3)
//   q > q+        psi = (-1)^n (C/2) exp(int_{q+}^q Yf) exp(int_{q-}^{q+} mean)
//
// with Yf the decaying forbidden-region log-derivative. Both pieces agree
// with the middle one at q-, and at q+ whenever the phase integral equals
// pi (n + 2/3). Tails are cut where the accumulated decay exponent reaches
// QuadratureSpec::tail_decay_cutoff.

#include <functional>
#include <memory>

#include "uniwkb/potential.hpp"
#include "uniwkb/quadrature.hpp"

namespace uniwkb {

/// int_{q-}^{q+} phase dq at energy E.
double phase_integral(const PotentialModel& potential, double E, double hbar, double mass,
                      const QuadratureSpec& spec = {});

/// E_sp with phase_integral(E_sp) = pi (n + 2/3). Throws NoBoundStateError
/// when the condition has no root below the well top.
double solve_quantization(const PotentialModel& potential, int n, double hbar, double mass,
                          const QuadratureSpec& spec = {});

enum class Piece { left, middle, right };

struct WaveSample {
  double psi = 0.0;
  double dpsi = 0.0;
  double h_psi = 0.0;
};

/// The matched three-piece wavefunction at a fixed energy, normalized to 1
/// over [q_left, q_right].
class ApproxWavefunction {
public:
  ApproxWavefunction(PotentialModel potential, double E, int n, double hbar, double mass,
                     const QuadratureSpec& spec = {});

  /// Uses the piece that contains q; zero outside [q_left, q_right].
  WaveSample sample(double q) const;
  /// Evaluates one piece's formula at q regardless of where q lies.
  WaveSample sample(double q, Piece piece) const;
  Piece piece_of(double q) const;
  /// C exp(int_{q-}^q mean), the amplitude of the middle piece.
  double envelope(double q) const;

  double energy() const { return energy_; }
  int level() const { return n_; }
  double norm_c() const { return c_; }
  const TurningPoints& turning() const { return tp_; }
  double q_left() const { return q_left_; }
  double q_right() const { return q_right_; }
  /// Phase integral between the turning points.
  double phase_total() const { return phase_.total(); }
  /// Panel boundaries for integrals over the whole support.
  std::vector<double> breakpoints() const;
  const PotentialModel& potential() const { return potential_; }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }

private:
  double tail_end(int direction) const;

  PotentialModel potential_;
  double energy_;
  int n_;
  double hbar_;
  double mass_;
  QuadratureSpec spec_;
  TurningPoints tp_;
  double q_left_ = 0.0;
  double q_right_ = 0.0;
  CumulativeIntegral left_;    // Yf over [q_left, q-]
  CumulativeIntegral mean_;    // mean over [q-, q+]
  CumulativeIntegral phase_;   // phase over [q-, q+]
  CumulativeIntegral right_;   // Yf over [q+, q_right]
  double c_ = 1.0;
};

struct EigenSolution {
  int n = 0;
  double e_sp = 0.0;
  double e_bar = 0.0;    // <H>
  double h2 = 0.0;       // <H^2>
  double norm_c = 0.0;
  TurningPoints turning;
  std::shared_ptr<const ApproxWavefunction> wave;
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::function<double(double)> h_psi;
};

/// Builds the normalized wavefunction at E (normally E_sp) and its moments.
EigenSolution assemble(const PotentialModel& potential, double E, int n, double hbar, double mass,
                       const QuadratureSpec& spec = {});

/// (hbar^2/2m) int psi'^2 + int V psi^2.
double expectation_h(const ApproxWavefunction& wave, const QuadratureSpec& spec = {});
double expectation_h(const EigenSolution& solution);

/// int (H psi)^2.
double expectation_h2(const ApproxWavefunction& wave, const QuadratureSpec& spec = {});
double expectation_h2(const EigenSolution& solution);

/// solve_quantization followed by assemble.
EigenSolution solve_level(const PotentialModel& potential, int n, double hbar, double mass,
                          const QuadratureSpec& spec = {});

/// One-sided mismatches at the turning points, relative to the local
/// envelope C exp(int mean) (times |Y| for the derivative).
struct ContinuityReport {
  double psi_left = 0.0;
  double dpsi_left = 0.0;
  double psi_right = 0.0;
  double dpsi_right = 0.0;
};
ContinuityReport continuity(const ApproxWavefunction& wave);

/// Sign changes of psi on (q-, q+), counted on a fine grid.
int count_nodes(const ApproxWavefunction& wave, int samples = 4000);

}  // namespace uniwkb
