#pragma once

// Reference table of published verification quantities, stored as CSV
// (potential,n,metric,value) with a trailing "#fnv1a64,<hex>" line that
// hashes every byte above it.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uniwkb/metrics.hpp"

namespace uniwkb {

inline constexpr const char* kGoldenEnvVar = "UNIWKB_GOLDEN";

std::uint64_t fnv1a64(std::string_view bytes);

struct GoldenEntry {
  std::string potential;
  int n = 0;
  Metric metric = Metric::delta_psi;
  double value = 0.0;
};

struct GoldenTable {
  std::vector<GoldenEntry> entries;

  std::optional<double> find(std::string_view potential, int n, Metric metric) const;
};

/// $UNIWKB_GOLDEN if set and non-empty, else `fallback`.
std::string golden_path(const std::string& fallback);

/// Throws IntegrityError when the file is unreadable, the checksum line is
/// missing or wrong, or a row is malformed.
GoldenTable load_golden(const std::string& path);

/// Relative band for one published value: 2% at or above 1e-5 in magnitude,
/// 10% below; doubled when loose.
double acceptance_band(double published, bool loose = false);

struct CellCheck {
  std::string potential;
  int n = 0;
  Metric metric = Metric::delta_psi;
  double computed = 0.0;
  double published = 0.0;
  double rel_error = 0.0;
  double band = 0.0;
  bool sign_ok = true;
  bool pass = false;
};

/// One check per golden entry, in golden-file order. Entries without a
/// computed counterpart fail with a NaN computed value.
std::vector<CellCheck> check_table(const std::vector<TableRow>& rows, const GoldenTable& golden,
                                   bool loose = false);

}  // namespace uniwkb
