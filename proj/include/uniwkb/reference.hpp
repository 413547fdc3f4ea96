#pragma once

// Closed-form eigenpairs of the three built-in wells and a Numerov
// shooting solver that serves as an independent eigenvalue oracle.

#include <functional>
#include <limits>

#include "uniwkb/potential.hpp"

namespace uniwkb {

/// Returned by bound_count for wells with infinitely many levels.
inline constexpr int kUnboundedLevels = std::numeric_limits<int>::max();

struct ExactLevel {
  int n = 0;
  double energy = 0.0;
  std::function<double(double)> psi;   // normalized, positive on the left tail
  std::function<double(double)> dpsi;
  double support_lo = 0.0;             // interval carrying all but ~e^{-50} of psi
  double support_hi = 0.0;
};

/// Throws DomainError for expression/callable kinds or when n is not a bound level.
double exact_energy(PotentialKind kind, const ParamMap& params, int n, double hbar, double mass);

/// Number of bound levels; kUnboundedLevels for the harmonic well.
int bound_count(PotentialKind kind, const ParamMap& params);

/// Hermite, Laguerre or Gegenbauer forms from three-term recurrences,
/// normalized by quadrature.
ExactLevel exact_wavefunction(PotentialKind kind, const ParamMap& params, int n, double hbar,
                              double mass);

struct NumerovSpec {
  double step_factor = 1e-4;   // step^2 max|Q| / hbar^2 on the grid (at most 1e-3)
  double tail_decay = 41.45;   // ln(1e18): tail length of the integration domain
  double rel_tol = 1e-12;      // bisection stopping width relative to |E| + hbar omega
  int max_iter = 200;
};

/// n-th eigenvalue by Numerov integration and node-count bisection.
/// Throws NoBoundStateError when no such level exists below the well top,
/// ConvergenceError when the bisection stalls.
double numerov_solve(const PotentialModel& potential, int n, double hbar, double mass,
                     const NumerovSpec& spec = {});

}  // namespace uniwkb
