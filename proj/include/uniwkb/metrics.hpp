#pragma once

// Comparison of assembled approximate eigenfunctions with the closed-form
// ones, and the 3 x 4 table of verification quantities in canonical units.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "uniwkb/potential.hpp"
#include "uniwkb/quadrature.hpp"
#include "uniwkb/reference.hpp"
#include "uniwkb/spectral.hpp"

namespace uniwkb {

enum class Metric { delta_psi, delta_psi_prime, delta_h_psi, d, delta_e };

inline constexpr Metric kAllMetrics[] = {Metric::delta_psi, Metric::delta_psi_prime,
                                         Metric::delta_h_psi, Metric::d, Metric::delta_e};

/// Column names used in the golden table and CLI output.
std::string_view metric_name(Metric metric);
/// Throws DomainError for unknown names.
Metric parse_metric(std::string_view name);

struct MetricsRow {
  int n = 0;
  double delta_psi = 0.0;
  double delta_psi_prime = 0.0;
  double delta_h_psi = 0.0;
  double d = 0.0;
  double delta_e = 0.0;

  double get(Metric metric) const;
};

using RealFn = std::function<double(double)>;
using InnerProduct = std::function<double(const RealFn&, const RealFn&)>;

/// 1 - (<f1|f2> + <f2|f1>) / (<f1|f1> + <f2|f2>). Symmetric in f1, f2 bit for
/// bit whenever the inner product is. Throws DomainError if both norms vanish.
double relative_deviation(const RealFn& f1, const RealFn& f2, const InnerProduct& inner);

/// Same quantity on a shared grid with quadrature weights.
double relative_deviation(const std::vector<double>& f1, const std::vector<double>& f2,
                          const std::vector<double>& weights);

/// L2 product over [breaks.front(), breaks.back()], split at every break.
InnerProduct l2_inner_product(std::vector<double> breaks, QuadratureSpec spec = {});

/// Inner products of an exact and an approximate level over the union of
/// their supports.
struct Overlaps {
  double psi = 0.0;        // <ex|ap>
  double dpsi = 0.0;       // <ex'|ap'>
  double dpsi_ex = 0.0;    // <ex'|ex'>
  double dpsi_ap = 0.0;    // <ap'|ap'>
};

/// Throws DomainError when <ex|ap> < 0, i.e. the two functions were not
/// sign-aligned.
Overlaps overlaps(const ExactLevel& exact, const EigenSolution& approx,
                  const QuadratureSpec& spec = {});

double delta_psi(const ExactLevel& exact, const EigenSolution& approx,
                 const QuadratureSpec& spec = {});
double delta_psi_prime(const ExactLevel& exact, const EigenSolution& approx,
                       const QuadratureSpec& spec = {});
double delta_h_psi(double exact_energy, double overlap, double h2_moment);
double discrepancy_d(double e_bar, double h2_moment);
/// Signed; throws DomainError when e_exact is zero.
double delta_e(double e_bar, double e_exact);

/// All five quantities for one level.
MetricsRow compare_level(const ExactLevel& exact, const EigenSolution& approx,
                         const QuadratureSpec& spec = {});

/// Units of a table run. The quantities are dimensionless, so any choice
/// gives the same table up to round-off.
struct TableUnits {
  double hbar = 1.0;
  double mass = 1.0;
  double k = 0.5;       // harmonic stiffness
  double alpha = 1.0;   // Morse and Poschl-Teller inverse width
};

struct TableCell {
  PotentialKind kind = PotentialKind::harmonic;
  ParamMap params;
  int n = 0;
};

/// Harmonic, Morse gamma = 4.5 and Poschl-Teller lambda = 5, n = 0..3.
std::vector<TableCell> table_cells(const TableUnits& units = {});

struct TableRow {
  std::string potential;   // kind_name of the cell
  MetricsRow metrics;
  double e_sp = 0.0;
  double e_bar = 0.0;
  double e_exact = 0.0;
};

/// One row per cell, cells evaluated concurrently. A failing cell rethrows
/// its error with the potential and level prefixed to the message.
std::vector<TableRow> verification_table(const TableUnits& units = {},
                                         const QuadratureSpec& spec = {});

}  // namespace uniwkb
