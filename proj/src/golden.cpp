#include "uniwkb/golden.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "uniwkb/error.hpp"

namespace uniwkb {

namespace {

constexpr std::string_view kChecksumTag = "#fnv1a64,";
constexpr std::string_view kHeader = "potential,n,metric,value";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::optional<double> GoldenTable::find(std::string_view potential, int n, Metric metric) const {
  for (const GoldenEntry& e : entries) {
    if (e.potential == potential && e.n == n && e.metric == metric) return e.value;
  }
  return std::nullopt;
}

std::string golden_path(const std::string& fallback) {
  const char* env = std::getenv(kGoldenEnvVar);
  return (env != nullptr && *env != '\0') ? std::string(env) : fallback;
}

GoldenTable load_golden(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot read golden table " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const std::size_t tag = text.rfind(kChecksumTag);
  if (tag == std::string::npos || (tag != 0 && text[tag - 1] != '\n')) {
    throw IntegrityError("golden table " + path + " has no checksum line");
  }
  const std::string body = text.substr(0, tag);
  std::string stated = text.substr(tag + kChecksumTag.size());
  while (!stated.empty() && (stated.back() == '\n' || stated.back() == '\r')) stated.pop_back();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  if (stated != hex) {
    throw IntegrityError("golden table " + path + " fails its checksum (stored " + stated +
                         ", computed " + hex + ")");
  }

  GoldenTable table;
  std::stringstream lines(body);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != kHeader) throw IntegrityError("golden table " + path + " has an unexpected header");
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    try {
      if (f.size() != 4) throw DomainError("expected 4 fields");
      std::size_t used = 0;
      GoldenEntry e;
      e.potential = f[0];
      e.n = std::stoi(f[1], &used);
      if (used != f[1].size()) throw DomainError("bad level");
      e.metric = parse_metric(f[2]);
      e.value = std::stod(f[3], &used);
      if (used != f[3].size()) throw DomainError("bad value");
      table.entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw IntegrityError("golden table " + path + " line " + std::to_string(lineno) + ": " +
                           ex.what());
    }
  }
  return table;
}

double acceptance_band(double published, bool loose) {
  const double band = std::abs(published) >= 1e-5 ? 0.02 : 0.10;
  return loose ? 2.0 * band : band;
}

std::vector<CellCheck> check_table(const std::vector<TableRow>& rows, const GoldenTable& golden,
                                   bool loose) {
  std::vector<CellCheck> checks;
  checks.reserve(golden.entries.size());
  for (const GoldenEntry& e : golden.entries) {
    CellCheck c;
    c.potential = e.potential;
    c.n = e.n;
    c.metric = e.metric;
    c.published = e.value;
    c.band = acceptance_band(e.value, loose);
    c.computed = std::numeric_limits<double>::quiet_NaN();
    for (const TableRow& r : rows) {
      if (r.potential == e.potential && r.metrics.n == e.n) c.computed = r.metrics.get(e.metric);
    }
    c.rel_error = std::abs(c.computed - e.value) / std::abs(e.value);
    c.sign_ok = std::signbit(c.computed) == std::signbit(e.value);
    c.pass = std::isfinite(c.computed) && c.sign_ok && c.rel_error <= c.band;
    checks.push_back(c);
  }
  return checks;
}

}  // namespace uniwkb
