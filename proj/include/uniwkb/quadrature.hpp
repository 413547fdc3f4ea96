#pragma once

// Adaptive Gauss-Kronrod (10/21) quadrature, Gauss-Legendre rules, running
// integrals with cheap partial-panel evaluation, and Brent root finding.

#include <array>
#include <functional>
#include <vector>

namespace uniwkb {

struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_depth = 40;                 // maximum number of bisections of any panel
  double tail_decay_cutoff = 45.0;    // tails are cut where the decay exponent reaches this
  int max_intervals = 20000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Global adaptive GK21. Throws ConvergenceError when the tolerance cannot be
/// met within max_intervals; throws DomainError when rel_tol < 1e-13.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

/// Vector-valued variant: f writes `dim` components into its output span.
/// Every component must meet max(abs_tol, rel_tol |I_k|), with a round-off
/// floor relative to the integral of |f_k|.
std::vector<double> integrate_vector(const std::function<void(double, double*)>& f, int dim,
                                     double a, double b, const QuadratureSpec& spec = {});

/// n-point Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Shared 20-point rule.
const GaussRule& gauss_legendre_20();

/// Running integral F(x) = int_a^x f with F known at adaptive panel edges and
/// a 20-point Gauss rule over the partial panel in between. The range starts
/// as kCumulativeSeedPanels equal panels plus any interior cuts, so that a
/// panel whose error estimate vanishes by symmetry is still short, and points
/// where f is not smooth can be made panel edges.
class CumulativeIntegral {
public:
  CumulativeIntegral() = default;
  static constexpr int kCumulativeSeedPanels = 8;

  CumulativeIntegral(std::function<double(double)> f, double a, double b,
                     const QuadratureSpec& spec = {}, std::vector<double> cuts = {});

  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  double total() const { return cumulative_.back(); }

  /// int_a^x f for x in [a, b] (clamped outside).
  double operator()(double x) const;

private:
  std::function<double(double)> f_;
  std::vector<double> edges_{0.0};
  std::vector<double> cumulative_{0.0};
};

/// Brent's method on a sign-changing bracket. Throws DomainError when
/// f(a), f(b) do not bracket a root; ConvergenceError after max_iter steps.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-14, double rtol = 4e-16, int max_iter = 200);

}  // namespace uniwkb
