#include "uniwkb/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>

#include "uniwkb/error.hpp"

namespace uniwkb {

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::delta_psi: return "delta_psi";
    case Metric::delta_psi_prime: return "delta_psi_prime";
    case Metric::delta_h_psi: return "delta_h_psi";
    case Metric::d: return "d";
    case Metric::delta_e: return "delta_e";
  }
  return "";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw DomainError("unknown metric '" + std::string(name) + "'");
}

double MetricsRow::get(Metric metric) const {
  switch (metric) {
    case Metric::delta_psi: return delta_psi;
    case Metric::delta_psi_prime: return delta_psi_prime;
    case Metric::delta_h_psi: return delta_h_psi;
    case Metric::d: return d;
    case Metric::delta_e: return delta_e;
  }
  return 0.0;
}

namespace {

double deviation_from(double cross12, double cross21, double norm1, double norm2) {
  const double denom = norm1 + norm2;
  if (!(denom > 0.0)) throw DomainError("relative deviation of two zero functions");
  return 1.0 - (cross12 + cross21) / denom;
}

}  // namespace

double relative_deviation(const RealFn& f1, const RealFn& f2, const InnerProduct& inner) {
  return deviation_from(inner(f1, f2), inner(f2, f1), inner(f1, f1), inner(f2, f2));
}

double relative_deviation(const std::vector<double>& f1, const std::vector<double>& f2,
                          const std::vector<double>& weights) {
  if (f1.size() != f2.size() || f1.size() != weights.size()) {
    throw DomainError("relative deviation needs samples and weights of equal length");
  }
  double cross = 0.0, n1 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    cross += weights[i] * f1[i] * f2[i];
    n1 += weights[i] * f1[i] * f1[i];
    n2 += weights[i] * f2[i] * f2[i];
  }
  return deviation_from(cross, cross, n1, n2);
}

InnerProduct l2_inner_product(std::vector<double> breaks, QuadratureSpec spec) {
  std::sort(breaks.begin(), breaks.end());
  if (breaks.size() < 2) throw DomainError("inner product needs an interval");
  return [breaks = std::move(breaks), spec](const RealFn& f, const RealFn& g) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      total += integrate([&](double q) { return f(q) * g(q); }, breaks[i], breaks[i + 1], spec).value;
    }
    return total;
  };
}

Overlaps overlaps(const ExactLevel& exact, const EigenSolution& approx, const QuadratureSpec& spec) {
  std::vector<double> cuts = approx.wave->breakpoints();
  cuts.push_back(exact.support_lo);
  cuts.push_back(exact.support_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const ApproxWavefunction& wave = *approx.wave;
  auto integrand = [&](double q, double* out) {
    const WaveSample s = wave.sample(q);
    const bool inside = q >= exact.support_lo && q <= exact.support_hi;
    const double ex = inside ? exact.psi(q) : 0.0;
    const double dex = inside ? exact.dpsi(q) : 0.0;
    out[0] = ex * s.psi;
    out[1] = dex * s.dpsi;
    out[2] = dex * dex;
    out[3] = s.dpsi * s.dpsi;
  };
  std::array<double, 4> sum{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const std::vector<double> part = integrate_vector(integrand, 4, cuts[i], cuts[i + 1], spec);
    for (int k = 0; k < 4; ++k) sum[k] += part[k];
  }
  if (sum[0] < 0.0) {
    throw DomainError("negative overlap: exact and approximate levels are not sign-aligned");
  }
  return {sum[0], sum[1], sum[2], sum[3]};
}

double delta_psi(const ExactLevel& exact, const EigenSolution& approx, const QuadratureSpec& spec) {
  return 1.0 - overlaps(exact, approx, spec).psi;
}

double delta_psi_prime(const ExactLevel& exact, const EigenSolution& approx,
                       const QuadratureSpec& spec) {
  const Overlaps o = overlaps(exact, approx, spec);
  return deviation_from(o.dpsi, o.dpsi, o.dpsi_ex, o.dpsi_ap);
}

double delta_h_psi(double exact_energy, double overlap, double h2_moment) {
  const double e2 = exact_energy * exact_energy;
  return (h2_moment + e2 * (1.0 - 2.0 * overlap)) / (h2_moment + e2);
}

double discrepancy_d(double e_bar, double h2_moment) {
  const double e2 = e_bar * e_bar;
  return (h2_moment - e2) / (h2_moment + e2);
}

double delta_e(double e_bar, double e_exact) {
  if (e_exact == 0.0) throw DomainError("relative energy error against a zero exact energy");
  return e_bar / e_exact - 1.0;
}

MetricsRow compare_level(const ExactLevel& exact, const EigenSolution& approx,
                         const QuadratureSpec& spec) {
  const Overlaps o = overlaps(exact, approx, spec);
  MetricsRow row;
  row.n = approx.n;
  row.delta_psi = 1.0 - o.psi;
  row.delta_psi_prime = deviation_from(o.dpsi, o.dpsi, o.dpsi_ex, o.dpsi_ap);
  row.delta_h_psi = delta_h_psi(exact.energy, o.psi, approx.h2);
  row.d = discrepancy_d(approx.e_bar, approx.h2);
  row.delta_e = delta_e(approx.e_bar, exact.energy);
  return row;
}

std::vector<TableCell> table_cells(const TableUnits& units) {
  std::vector<TableCell> cells;
  for (int n = 0; n < 4; ++n) cells.push_back({PotentialKind::harmonic, {{"k", units.k}}, n});
  for (int n = 0; n < 4; ++n) {
    cells.push_back({PotentialKind::morse, {{"gamma", 4.5}, {"alpha", units.alpha}}, n});
  }
  for (int n = 0; n < 4; ++n) {
    cells.push_back({PotentialKind::poschl_teller, {{"lambda", 5.0}, {"alpha", units.alpha}}, n});
  }
  return cells;
}

namespace {

TableRow evaluate_cell(const TableCell& cell, const TableUnits& units, const QuadratureSpec& spec) {
  const PotentialModel potential = make_builtin(cell.kind, cell.params, units.hbar, units.mass);
  const EigenSolution approx = solve_level(potential, cell.n, units.hbar, units.mass, spec);
  const ExactLevel exact = exact_wavefunction(cell.kind, cell.params, cell.n, units.hbar, units.mass);
  TableRow row;
  row.potential = kind_name(cell.kind);
  row.metrics = compare_level(exact, approx, spec);
  row.e_sp = approx.e_sp;
  row.e_bar = approx.e_bar;
  row.e_exact = exact.energy;
  return row;
}

// Keeps the dynamic type so callers can still map errors to exit codes.
[[noreturn]] void rethrow_with_cell(const TableCell& cell) {
  const std::string where = kind_name(cell.kind) + " n=" + std::to_string(cell.n) + ": ";
  try {
    throw;
  } catch (const NoBoundStateError& e) {
    throw NoBoundStateError(where + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + e.what());
  } catch (const OverflowError& e) {
    throw OverflowError(where + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
}

}  // namespace

std::vector<TableRow> verification_table(const TableUnits& units, const QuadratureSpec& spec) {
  const std::vector<TableCell> cells = table_cells(units);
  std::vector<std::future<TableRow>> jobs;
  jobs.reserve(cells.size());
  for (const TableCell& cell : cells) {
    jobs.push_back(std::async(std::launch::async, [&cell, &units, &spec] {
      try {
        return evaluate_cell(cell, units, spec);
      } catch (const Error&) {
        rethrow_with_cell(cell);
      }
    }));
  }
  std::vector<TableRow> rows;
  rows.reserve(cells.size());
  for (auto& job : jobs) rows.push_back(job.get());
  return rows;
}

}  // namespace uniwkb
