// uniwkb: solve bound levels, reproduce the verification table, dump
// wavefunction samples.
//
// Exit codes: 0 success, 1 verification cell outside its band, 2 invalid
// configuration / expression / golden file, 3 no bound state, 4 solver did
// not converge.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "uniwkb/error.hpp"
#include "uniwkb/golden.hpp"
#include "uniwkb/metrics.hpp"
#include "uniwkb/potential.hpp"
#include "uniwkb/reference.hpp"
#include "uniwkb/spectral.hpp"
#include "uniwkb/wkb_core.hpp"

#ifndef UNIWKB_DEFAULT_GOLDEN
#define UNIWKB_DEFAULT_GOLDEN "data/verification_table.csv"
#endif

namespace {

using namespace uniwkb;
using nlohmann::ordered_json;

constexpr const char* kSchema = "uniwkb/1";

enum Exit { kOk = 0, kCellFailed = 1, kBadConfig = 2, kNoBound = 3, kNoConvergence = 4 };

class ConfigError : public Error {
public:
  using Error::Error;
};

struct RunConfig {
  std::string potential = "harmonic";
  std::string expr;
  std::vector<std::string> params;
  double hbar = 1.0;
  double mass = 1.0;
  std::string levels = "0";
  std::string out;
  std::string format;   // json for solve, csv for dump when empty
  double rel_tol = QuadratureSpec{}.rel_tol;
  int grid = 1001;
  std::string range;
  std::string grid_kind = "uniform";
  bool tol_loose = false;
};

// Resolved form of a RunConfig.
struct Problem {
  PotentialKind kind = PotentialKind::harmonic;
  ParamMap params;
  PotentialModel model{PotentialKind::callable, {}, {}, "", {0.0, 1.0}};
  std::vector<int> levels;
  QuadratureSpec spec;

  bool builtin() const { return kind != PotentialKind::expression; }
};

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid " + what + " '" + text + "'");
}

int parse_level(const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid level '" + text + "' (expected a non-negative integer)");
}

// "3", "0..3" (inclusive) or comma-separated mixtures such as "0,2..4".
std::vector<int> parse_levels(const std::string& text) {
  std::set<int> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t dots = item.find("..");
    if (dots == std::string::npos) {
      levels.insert(parse_level(item));
      continue;
    }
    const int lo = parse_level(item.substr(0, dots));
    const int hi = parse_level(item.substr(dots + 2));
    if (hi < lo) throw ConfigError("empty level range '" + item + "'");
    for (int n = lo; n <= hi; ++n) levels.insert(n);
  }
  if (levels.empty()) throw ConfigError("no levels requested");
  return {levels.begin(), levels.end()};
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap params;
  for (const std::string& item : items) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("parameter '" + item + "' is not of the form name=value");
    }
    const std::string name = item.substr(0, eq);
    if (!params.emplace(name, parse_number(item.substr(eq + 1), "value for " + name)).second) {
      throw ConfigError("parameter '" + name + "' given twice");
    }
  }
  return params;
}

void check_param_names(PotentialKind kind, const ParamMap& params) {
  static const std::map<PotentialKind, std::set<std::string>> allowed{
      {PotentialKind::harmonic, {"k"}},
      {PotentialKind::morse, {"gamma", "g", "alpha", "a"}},
      {PotentialKind::poschl_teller, {"lambda", "l", "alpha", "a"}},
  };
  const auto it = allowed.find(kind);
  if (it == allowed.end()) return;
  for (const auto& [name, value] : params) {
    if (!it->second.contains(name)) {
      throw ConfigError("unknown parameter '" + name + "' for " + kind_name(kind));
    }
  }
}

Problem resolve(const RunConfig& cfg) {
  Problem p;
  try {
    p.kind = parse_kind(cfg.potential);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (p.kind == PotentialKind::callable) throw ConfigError("unknown potential '" + cfg.potential + "'");
  if (!(cfg.hbar > 0.0) || !(cfg.mass > 0.0)) throw ConfigError("--hbar and --mass must be positive");
  if (!(cfg.rel_tol >= 1e-13 && cfg.rel_tol < 1.0)) {
    throw ConfigError("--rel-tol must lie in [1e-13, 1)");
  }
  p.spec.rel_tol = cfg.rel_tol;
  p.params = parse_params(cfg.params);
  p.levels = parse_levels(cfg.levels);
  if (p.kind == PotentialKind::expression) {
    if (cfg.expr.empty()) throw ConfigError("--potential expr needs --expr");
    p.model = parse_potential(cfg.expr, p.params);
  } else {
    if (!cfg.expr.empty()) throw ConfigError("--expr is only valid with --potential expr");
    check_param_names(p.kind, p.params);
    try {
      p.model = make_builtin(p.kind, p.params, cfg.hbar, cfg.mass);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    p.params = p.model.params();
    const int bound = bound_count(p.kind, p.params);
    if (p.levels.back() >= bound) {
      throw NoBoundStateError(fmt::format("{} has only {} bound levels; level {} requested",
                                          p.model.description(), bound, p.levels.back()));
    }
  }
  return p;
}

ordered_json tolerances_json(const QuadratureSpec& spec) {
  ordered_json t;
  t["rel_tol"] = spec.rel_tol;
  t["abs_tol"] = spec.abs_tol;
  t["max_depth"] = spec.max_depth;
  t["tail_decay_cutoff"] = spec.tail_decay_cutoff;
  return t;
}

ordered_json config_json(const RunConfig& cfg, const Problem& p) {
  ordered_json c;
  c["potential"] = kind_name(p.kind);
  if (p.kind == PotentialKind::expression) c["expr"] = cfg.expr;
  c["params"] = ordered_json::object();
  for (const auto& [name, value] : p.params) c["params"][name] = value;
  c["hbar"] = cfg.hbar;
  c["mass"] = cfg.mass;
  c["levels"] = p.levels;
  c["tolerances"] = tolerances_json(p.spec);
  return c;
}

ordered_json metrics_json(const MetricsRow& row) {
  ordered_json m;
  for (Metric metric : kAllMetrics) m[std::string(metric_name(metric))] = row.get(metric);
  return m;
}

// Writes atomically: nothing appears at `path` unless the whole text does.
void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    out.close();
    if (!out) {
      std::filesystem::remove(tmp);
      throw ConfigError("cannot write " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot write " + path + ": " + ec.message());
  }
}

std::string fmt_real(double v) { return fmt::format("{:.17g}", v); }

struct LevelResult {
  EigenSolution solution;
  std::optional<ExactLevel> exact;
  std::optional<MetricsRow> metrics;
};

LevelResult solve_one(const Problem& p, const RunConfig& cfg, int n) {
  LevelResult r;
  r.solution = solve_level(p.model, n, cfg.hbar, cfg.mass, p.spec);
  if (p.builtin()) {
    r.exact = exact_wavefunction(p.kind, p.params, n, cfg.hbar, cfg.mass);
    r.metrics = compare_level(*r.exact, r.solution, p.spec);
  }
  return r;
}

void check_format(RunConfig& cfg, const char* fallback) {
  if (cfg.format.empty()) cfg.format = fallback;
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
}

int cmd_solve(RunConfig cfg) {
  check_format(cfg, "json");
  const auto t0 = std::chrono::steady_clock::now();
  const Problem p = resolve(cfg);

  std::vector<LevelResult> results;
  for (int n : p.levels) results.push_back(solve_one(p, cfg, n));
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (!(results[i].solution.e_sp > results[i - 1].solution.e_sp)) {
      throw ConvergenceError("spectral energies are not increasing with the level index");
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::string text;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["schema"] = kSchema;
    doc["config"] = config_json(cfg, p);
    doc["levels"] = ordered_json::array();
    for (const LevelResult& r : results) {
      ordered_json rec;
      rec["n"] = r.solution.n;
      rec["e_sp"] = r.solution.e_sp;
      rec["e_bar"] = r.solution.e_bar;
      if (r.exact) rec["e_exact"] = r.exact->energy;
      if (r.metrics) rec["metrics"] = metrics_json(*r.metrics);
      doc["levels"].push_back(rec);
    }
    ordered_json prov;
    prov["version"] = UNIWKB_VERSION;
    prov["tolerances"] = tolerances_json(p.spec);
    prov["timings"] = {{"total_s", seconds}};
    doc["provenance"] = prov;
    text = doc.dump(2) + "\n";
  } else {
    text = "n,e_sp,e_bar,e_exact";
    for (Metric metric : kAllMetrics) text += "," + std::string(metric_name(metric));
    text += "\n";
    for (const LevelResult& r : results) {
      text += fmt::format("{},{},{},{}", r.solution.n, fmt_real(r.solution.e_sp),
                          fmt_real(r.solution.e_bar), r.exact ? fmt_real(r.exact->energy) : "");
      for (Metric metric : kAllMetrics) {
        text += "," + (r.metrics ? fmt_real(r.metrics->get(metric)) : std::string());
      }
      text += "\n";
    }
  }
  emit(text, cfg.out);
  return kOk;
}

std::pair<double, double> parse_range(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--range must be qmin:qmax");
  const double lo = parse_number(text.substr(0, colon), "range start");
  const double hi = parse_number(text.substr(colon + 1), "range end");
  if (!(hi > lo)) throw ConfigError("--range needs qmin < qmax");
  return {lo, hi};
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v;
  if (count == 1) return {0.5 * (lo + hi)};
  for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
  return v;
}

// Uniform grid, or the points shared out over the three pieces in
// proportion 1:2:1 so that the oscillatory middle is sampled more densely.
std::vector<double> make_grid(double lo, double hi, int count, const std::string& kind,
                              const TurningPoints& tp) {
  if (kind == "uniform") return linspace(lo, hi, count);
  const double a = std::clamp(tp.q_minus, lo, hi);
  const double b = std::clamp(tp.q_plus, lo, hi);
  int n_left = a > lo ? count / 4 : 0;
  int n_right = hi > b ? count / 4 : 0;
  const int n_mid = count - n_left - n_right;
  std::vector<double> grid;
  if (n_left > 0) {
    for (int i = 0; i < n_left; ++i) grid.push_back(lo + (a - lo) * i / n_left);
  }
  for (double q : linspace(a, b, n_mid)) grid.push_back(q);
  if (n_right > 0) {
    for (int i = 1; i <= n_right; ++i) grid.push_back(b + (hi - b) * i / n_right);
  }
  return grid;
}

int cmd_dump(RunConfig cfg) {
  check_format(cfg, "csv");
  if (cfg.grid < 2) throw ConfigError("--grid must be at least 2");
  if (cfg.grid_kind != "uniform" && cfg.grid_kind != "regions") {
    throw ConfigError("--grid-kind must be uniform or regions");
  }
  const Problem p = resolve(cfg);
  if (p.levels.size() != 1) throw ConfigError("dump takes exactly one level");
  std::optional<std::pair<double, double>> range;
  if (!cfg.range.empty()) range = parse_range(cfg.range);

  const LevelResult r = solve_one(p, cfg, p.levels.front());
  const ApproxWavefunction& wave = *r.solution.wave;
  const TurningPoints& tp = wave.turning();
  const auto [lo, hi] = range ? *range : std::pair{wave.q_left(), wave.q_right()};
  const std::vector<double> grid = make_grid(lo, hi, cfg.grid, cfg.grid_kind, tp);

  struct Row {
    double q, a;
    const char* region;
    WaveSample s;
    std::optional<double> psi_ex;
  };
  std::vector<Row> rows;
  for (double q : grid) {
    const QBundle b = q_bundle(p.model, q, wave.energy(), cfg.mass);
    double a;
    try {
      a = wkb::dimensionless_a(b, cfg.hbar);
    } catch (const DomainError&) {
      a = std::copysign(std::numeric_limits<double>::infinity(), b.Q);
    }
    const Piece piece = wave.piece_of(q);
    const char* region = piece == Piece::left    ? "left_forbidden"
                         : piece == Piece::right ? "right_forbidden"
                                                 : "allowed";
    std::optional<double> ex;
    if (r.exact) ex = r.exact->psi(q);
    rows.push_back({q, a, region, wave.sample(q), ex});
  }

  std::string text;
  if (cfg.format == "csv") {
    text = "q,a,region,psi_ap,dpsi_ap,psi_ex,h_psi\n";
    for (const Row& row : rows) {
      text += fmt::format("{},{},{},{},{},{},{}\n", fmt_real(row.q), fmt_real(row.a), row.region,
                          fmt_real(row.s.psi), fmt_real(row.s.dpsi),
                          row.psi_ex ? fmt_real(*row.psi_ex) : "", fmt_real(row.s.h_psi));
    }
  } else {
    ordered_json doc;
    doc["schema"] = kSchema;
    doc["config"] = config_json(cfg, p);
    doc["e_sp"] = r.solution.e_sp;
    doc["turning"] = {{"q_minus", tp.q_minus}, {"q_m", tp.q_m}, {"q_plus", tp.q_plus}};
    doc["rows"] = ordered_json::array();
    for (const Row& row : rows) {
      ordered_json j;
      j["q"] = row.q;
      j["a"] = std::isfinite(row.a) ? ordered_json(row.a) : ordered_json(fmt_real(row.a));
      j["region"] = row.region;
      j["psi_ap"] = row.s.psi;
      j["dpsi_ap"] = row.s.dpsi;
      j["psi_ex"] = row.psi_ex ? ordered_json(*row.psi_ex) : ordered_json(nullptr);
      j["h_psi"] = row.s.h_psi;
      doc["rows"].push_back(j);
    }
    text = doc.dump(2) + "\n";
  }
  emit(text, cfg.out);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const std::string path = golden_path(UNIWKB_DEFAULT_GOLDEN);
  const GoldenTable golden = load_golden(path);
  QuadratureSpec spec;
  spec.rel_tol = cfg.rel_tol;
  const std::vector<TableRow> rows = verification_table({}, spec);
  const std::vector<CellCheck> checks = check_table(rows, golden, cfg.tol_loose);

  std::string text = fmt::format("golden table: {}\nbands: {}\n\n", path,
                                 cfg.tol_loose ? "loose (4% / 20%)" : "standard (2% / 10%)");
  text += fmt::format("{:<14} {:>2}  {:<16} {:>13} {:>10} {:>9} {:>6}  {}\n", "potential", "n",
                      "metric", "computed", "published", "rel.err", "band", "result");
  int passed = 0;
  for (const CellCheck& c : checks) {
    passed += c.pass ? 1 : 0;
    text += fmt::format("{:<14} {:>2}  {:<16} {:>13.4e} {:>10.2e} {:>9.2e} {:>5.0f}%  {}{}\n",
                        c.potential, c.n, metric_name(c.metric), c.computed, c.published,
                        c.rel_error, 100.0 * c.band, c.pass ? "PASS" : "FAIL",
                        c.sign_ok ? "" : " (sign)");
  }
  text += fmt::format("\n{}/{} cells pass\n", passed, checks.size());
  emit(text, cfg.out);
  return passed == static_cast<int>(checks.size()) ? kOk : kCellFailed;
}

void add_problem_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--potential", cfg.potential, "harmonic | morse | poschl-teller | expr")
      ->capture_default_str();
  cmd->add_option("--expr", cfg.expr, "potential V(q) for --potential expr");
  cmd->add_option("--param", cfg.params, "parameter name=value (repeatable)");
  cmd->add_option("--hbar", cfg.hbar, "reduced Planck constant")->capture_default_str();
  cmd->add_option("--mass", cfg.mass, "particle mass")->capture_default_str();
  cmd->add_option("--levels", cfg.levels, "levels, e.g. 0..3 or 0,2,5")->capture_default_str();
  cmd->add_option("--out", cfg.out, "output file (default: stdout)");
  cmd->add_option("--format", cfg.format, "json | csv (default: json for solve, csv for dump)");
  cmd->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance")->capture_default_str();
}

// Points at the offending column of a malformed expression.
void report_parse_error(const ParseError& e, const std::string& expr) {
  std::cerr << "uniwkb: syntax error in expression at " << e.what() << "\n";
  if (!expr.empty()) {
    std::cerr << "  " << expr << "\n  " << std::string(e.column() > 0 ? e.column() - 1 : 0, ' ')
              << "^\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform WKB bound states from summed constituent series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", UNIWKB_VERSION);
  RunConfig cfg;

  CLI::App* solve = app.add_subcommand("solve", "solve levels and compare with closed forms");
  add_problem_options(solve, cfg);

  CLI::App* verify = app.add_subcommand("verify", "recompute the verification table");
  verify->add_flag("--tol-loose", cfg.tol_loose, "double every acceptance band");
  verify->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance")
      ->capture_default_str();
  verify->add_option("--out", cfg.out, "report file (default: stdout)");

  CLI::App* dump = app.add_subcommand("dump", "sample one level on a grid");
  add_problem_options(dump, cfg);
  dump->add_option("--grid", cfg.grid, "number of grid points")->capture_default_str();
  dump->add_option("--range", cfg.range, "qmin:qmax (default: the truncated support)");
  dump->add_option("--grid-kind", cfg.grid_kind, "uniform | regions")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_dump(cfg);
  } catch (const ParseError& e) {
    report_parse_error(e, cfg.expr);
    return kBadConfig;
  } catch (const IntegrityError& e) {
    std::cerr << "uniwkb: " << e.what() << "\n";
    return kBadConfig;
  } catch (const ConfigError& e) {
    std::cerr << "uniwkb: " << e.what() << "\n";
    return kBadConfig;
  } catch (const NoBoundStateError& e) {
    std::cerr << "uniwkb: no bound state: " << e.what() << "\n";
    return kNoBound;
  } catch (const DomainError& e) {
    std::cerr << "uniwkb: " << e.what() << "\n";
    return kBadConfig;
  } catch (const Error& e) {
    std::cerr << "uniwkb: solver failure: " << e.what() << "\n";
    return kNoConvergence;
  }
}
