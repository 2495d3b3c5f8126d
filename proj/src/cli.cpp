#include "dirac1d/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirac1d/error.hpp"
#include "dirac1d/model.hpp"
#include "dirac1d/oracle.hpp"
#include "dirac1d/records.hpp"
#include "dirac1d/spectrum.hpp"
#include "dirac1d/wavefunction.hpp"

namespace dirac1d {

namespace {

namespace fs = std::filesystem;
using io::Field;
using io::Record;
using io::Value;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;

// Accepts a flat JSON object or the usual key=value lines.
class JsonOrKeyValueConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigTOML::from_config(again);
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_string()) {
        item.inputs = {value.get<std::string>()};
      } else if (value.is_boolean()) {
        item.inputs = {value.get<bool>() ? "true" : "false"};
      } else if (value.is_number_integer()) {
        item.inputs = {std::to_string(value.get<long long>())};
      } else if (value.is_number()) {
        item.inputs = {io::format_number(value.get<double>())};
      } else {
        throw CLI::ConversionError("config key '" + key + "' must be a string, number or bool");
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

struct RunConfig {
  std::string command;
  PotentialParams params;
  std::string regime = "kratzer";
  std::string component = "upper";
  std::string levels = "0";
  std::string format = "json";
  std::string out;
  std::string strict_b = "on";
  bool units_of_m = false;
  int sign = 1;
  // wavefunction grid
  std::size_t grid_points = 16384;
  double x_min_factor = 1e-6;
  double x_max_factor = 40.0;
  // oracle
  OracleConfig oracle;
  std::string richardson = "on";
  double inject_offset = 0.0;
  // figure
  std::string figure_id;
  std::string out_dir = ".";
  std::string emit_config;
};

struct LevelRange {
  int lo = 0;
  int hi = 0;
};

LevelRange parse_levels(const std::string& text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorCode::InvalidConfig, "--n expects an integer or i..j, got '" + text + "'");
    }
    return v;
  };
  LevelRange r;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = parse_int(text);
  } else {
    r.lo = parse_int(std::string_view(text).substr(0, dots));
    r.hi = parse_int(std::string_view(text).substr(dots + 2));
  }
  if (r.lo < 0 || r.hi < r.lo) {
    throw Error(ErrorCode::InvalidConfig, "--n range must satisfy 0 <= i <= j, got '" + text + "'");
  }
  return r;
}

ValidatedProblem problem_of(const RunConfig& cfg) {
  const auto regime = parse_regime(cfg.regime);
  const auto component = parse_component(cfg.component);
  if (!regime || !component) throw Error(ErrorCode::InvalidConfig, "unknown regime or component");
  const BPolicy policy = cfg.strict_b == "on" ? BPolicy::Strict : BPolicy::Permissive;
  return validate(cfg.params, *regime, *component, policy);
}

std::string with_warnings(std::string diag, const ValidatedProblem& problem) {
  for (const auto& w : problem.warnings) {
    if (!diag.empty()) diag += ';';
    diag += "warning=" + w;
  }
  return diag;
}

Value num(double v) { return v; }
Value text(std::string_view s) { return std::string(s); }

std::string encode(const RunConfig& cfg, const std::vector<std::string>& columns,
                   const std::vector<Record>& records) {
  return cfg.format == "csv" ? io::to_csv(columns, records) : io::to_json(records);
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.out.empty()) {
    std::cout << content;
    std::cout.flush();
  } else {
    io::write_atomic(cfg.out, content);
  }
}

void emit_metadata(const RunConfig& cfg, const nlohmann::ordered_json& meta) {
  if (cfg.out.empty()) {
    std::cerr << meta.dump() << '\n';
  } else {
    io::write_atomic(cfg.out + ".meta.json", meta.dump(1) + "\n");
  }
}

nlohmann::ordered_json params_json(const PotentialParams& p) {
  return {{"M", p.mass}, {"D", p.dissociation}, {"a", p.length}, {"b", p.pseudoscalar}, {"q", p.shape}};
}

double energy_out(const RunConfig& cfg, double e) {
  return cfg.units_of_m ? e / cfg.params.mass : e;
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto problem = problem_of(cfg);
  const auto range = parse_levels(cfg.levels);
  const auto entries = spectrum_range(problem, range.lo, range.hi, cfg.sign);
  const std::vector<std::string> columns = {"regime", "component", "n", "E",
                                            "p",      "alpha",     "kappa", "diagnostics"};
  std::vector<Record> records;
  int missing = 0;
  for (const auto& entry : entries) {
    Record rec = {{"regime", text(to_string(problem.regime))},
                  {"component", text(to_string(problem.component))},
                  {"n", static_cast<long long>(entry.n)}};
    if (entry.level) {
      const auto& lv = *entry.level;
      rec.push_back({"E", num(energy_out(cfg, lv.energy))});
      rec.push_back({"p", num(lv.p)});
      rec.push_back({"alpha", num(lv.alpha)});
      rec.push_back({"kappa", num(lv.kappa)});
      rec.push_back({"diagnostics", text(with_warnings(lv.diagnostics, problem))});
    } else {
      ++missing;
      for (const char* key : {"E", "p", "alpha", "kappa"}) rec.push_back({key, Value{}});
      rec.push_back({"diagnostics", text(entry.marker)});
    }
    records.push_back(std::move(rec));
  }
  emit(cfg, encode(cfg, columns, records));
  std::cerr << "spectrum: " << entries.size() << " levels, " << missing << " without a bound state\n";
  return kExitOk;
}

nlohmann::ordered_json table_metadata(const RunConfig& cfg, const WavefunctionTable& t) {
  nlohmann::ordered_json meta;
  meta["regime"] = to_string(t.level.regime);
  meta["component"] = to_string(t.level.component);
  meta["n"] = t.level.n;
  meta["E"] = energy_out(cfg, t.level.energy);
  meta["p"] = t.level.p;
  meta["alpha"] = t.level.alpha;
  meta["kappa"] = t.level.kappa;
  meta["params"] = params_json(cfg.params);
  meta["norm_constant"] = t.norm_constant;
  meta["nodes"] = t.nodes;
  meta["ode_residual"] = t.residual;
  meta["tail_estimate"] = t.tail_estimate;
  meta["phi2_source"] = t.phi2_source;
  meta["phi1_available"] = t.phi1_available;
  meta["phase_convention"] = t.phase_convention;
  meta["grid"] = {{"x_min", t.grid.x_min}, {"x_max", t.grid.x_max}, {"points", t.grid.count}};
  return meta;
}

int cmd_wavefunction(const RunConfig& cfg) {
  const auto problem = problem_of(cfg);
  const auto range = parse_levels(cfg.levels);
  if (range.lo != range.hi) {
    throw Error(ErrorCode::InvalidConfig, "wavefunction takes a single level, got --n " + cfg.levels);
  }
  if (cfg.grid_points < 16) throw Error(ErrorCode::InvalidGrid, "--grid-points must be >= 16");
  if (!(cfg.x_min_factor > 0.0) || !(cfg.x_max_factor > cfg.x_min_factor) ||
      !std::isfinite(cfg.x_max_factor)) {
    throw Error(ErrorCode::InvalidGrid, "grid factors need 0 < x-min-factor < x-max-factor");
  }
  const auto level = solve_level(problem, range.lo, cfg.sign);
  const auto grid = default_grid(level, cfg.grid_points, cfg.x_min_factor, cfg.x_max_factor);
  const auto table = build_table(problem, level, grid);

  std::vector<Record> records;
  records.reserve(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    records.push_back({{"x", num(table.x[i])},
                       {"phi1", num(table.phi1[i])},
                       {"phi2", num(table.phi2[i])},
                       {"density", num(table.density[i])}});
  }
  const auto content = encode(cfg, {"x", "phi1", "phi2", "density"}, records);
  const auto meta = table_metadata(cfg, table);
  emit(cfg, content);
  emit_metadata(cfg, meta);
  std::cerr << "wavefunction: n=" << level.n << " nodes=" << table.nodes
            << " residual=" << io::format_number(table.residual) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const auto problem = problem_of(cfg);
  const auto range = parse_levels(cfg.levels);
  OracleConfig ocfg = cfg.oracle;
  ocfg.richardson = cfg.richardson == "on";
  check_config(ocfg);

  const std::vector<std::string> columns = {
      "regime",      "component",  "n",         "E",           "epsilon_analytic",
      "epsilon_oracle", "epsilon_fine", "epsilon_coarse", "abs_error", "rel_error",
      "energy_error", "oracle_nodes", "pass", "diagnostics"};
  std::vector<Record> records;
  int passed = 0;
  int total = 0;
  double worst = 0.0;
  for (int n = range.lo; n <= range.hi; ++n) {
    Record rec = {{"regime", text(to_string(problem.regime))},
                  {"component", text(to_string(problem.component))},
                  {"n", static_cast<long long>(n)}};
    VerificationReport rep;
    try {
      rep = verify_level(problem, n, cfg.sign, ocfg, cfg.inject_offset);
    } catch (const Error& e) {
      // absent levels are reported, not verified
      if (e.code() != ErrorCode::NoBoundState) throw;
      for (std::size_t k = 3; k + 1 < columns.size(); ++k) rec.push_back({columns[k], Value{}});
      rec.push_back({"diagnostics", text(e.what())});
      records.push_back(std::move(rec));
      continue;
    }
    ++total;
    passed += rep.pass ? 1 : 0;
    worst = std::max(worst, rep.rel_error);
    const std::vector<Field> fields = {{"E", num(energy_out(cfg, rep.level.energy))},
                                       {"epsilon_analytic", num(rep.epsilon_analytic)},
                                       {"epsilon_oracle", num(rep.epsilon_oracle)},
                                       {"epsilon_fine", num(rep.epsilon_fine)},
                                       {"epsilon_coarse", num(rep.epsilon_coarse)},
                                       {"abs_error", num(rep.abs_error)},
                                       {"rel_error", num(rep.rel_error)},
                                       {"energy_error", num(rep.energy_error)},
                                       {"oracle_nodes", static_cast<long long>(rep.oracle_nodes)},
                                       {"pass", rep.pass},
                                       {"diagnostics", text(rep.level.diagnostics)}};
    rec.insert(rec.end(), fields.begin(), fields.end());
    records.push_back(std::move(rec));
  }
  emit(cfg, encode(cfg, columns, records));
  std::cerr << "verify: " << passed << "/" << total << " passed, max rel error "
            << io::format_number(worst) << " (tolerance " << io::format_number(ocfg.pass_tolerance)
            << ")\n";
  return passed == total ? kExitOk : kExitVerify;
}

struct FigurePanel {
  std::string id;
  Component component;
  PotentialParams params;
  std::string sweep;  // "a", "b", "q" or "" for density panels
  double lo = 0.0;
  double hi = 0.0;
  int level = 0;
};

std::vector<FigurePanel> figure_panels() {
  const PotentialParams fam_a{1.0, 5.0, 1.0, 0.1, 0.01};
  const PotentialParams fam_b{1.0, 5.0, 5.0, 0.1, 0.01};
  const PotentialParams fam_q{1.0, 10.0, 1.0, 1.0, 0.01};
  return {
      {"1a", Component::Upper, fam_a, "a", 0.1, 10.0, 0},
      {"1b", Component::Upper, fam_b, "b", 0.05, 3.0, 0},
      {"1c", Component::Upper, fam_q, "q", 0.0, 0.05, 0},
      {"2a", Component::Lower, fam_a, "a", 0.1, 10.0, 0},
      {"2b", Component::Lower, fam_a, "a", 0.1, 1.0, 0},
      {"2c", Component::Lower, fam_b, "b", 0.05, 3.0, 0},
      {"2d", Component::Lower, fam_q, "q", 0.0, 0.05, 0},
      {"3a", Component::Upper, {1.0, 5.0, 1.0, 0.1, 0.01}, "", 0.0, 0.0, 0},
      {"3b", Component::Upper, {1.0, 5.0, 0.8, 0.1, 0.01}, "", 0.0, 0.0, 1},
      {"3c", Component::Upper, {1.0, 5.0, 0.5, 0.1, 0.01}, "", 0.0, 0.0, 2},
  };
}

constexpr int kSweepPoints = 200;
constexpr int kSweepLevels = 3;

void set_sweep(PotentialParams& p, const std::string& name, double v) {
  if (name == "a") p.length = v;
  if (name == "b") p.pseudoscalar = v;
  if (name == "q") p.shape = v;
}

void write_figure(const RunConfig& cfg, const FigurePanel& panel) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  const std::string stem = "fig" + panel.id;
  const std::string data_name = stem + "." + cfg.format;
  nlohmann::ordered_json meta;
  meta["id"] = panel.id;
  meta["regime"] = "kratzer";
  meta["component"] = to_string(panel.component);
  meta["params"] = params_json(panel.params);
  std::vector<std::string> columns;
  std::vector<Record> records;
  std::string plot;

  if (!panel.sweep.empty()) {
    columns = {panel.sweep};
    for (int k = 0; k < kSweepLevels; ++k) columns.push_back("E" + std::to_string(k));
    int failures = 0;
    for (int i = 0; i < kSweepPoints; ++i) {
      const double v = panel.lo + (panel.hi - panel.lo) * i / (kSweepPoints - 1);
      PotentialParams p = panel.params;
      set_sweep(p, panel.sweep, v);
      Record rec = {{panel.sweep, num(v)}};
      for (int k = 0; k < kSweepLevels; ++k) {
        Value e;
        try {
          const auto problem = validate(p, Regime::SpinSymmetricKratzer, panel.component);
          e = energy_out(cfg, solve_level(problem, k).energy);
        } catch (const Error&) {
          ++failures;
        }
        rec.push_back({"E" + std::to_string(k), e});
      }
      records.push_back(std::move(rec));
    }
    meta["sweep"] = {{"variable", panel.sweep}, {"from", panel.lo}, {"to", panel.hi},
                     {"points", kSweepPoints}, {"spacing", "uniform"}};
    meta["levels"] = {0, 1, 2};
    meta["failed_points"] = failures;
    meta["energy_units"] = cfg.units_of_m ? "M" : "natural";
    plot = "data " + data_name + "\nx " + panel.sweep + "\ny E0 E1 E2\nxlabel " + panel.sweep +
           "\nylabel E\ntitle energy of " + std::string(to_string(panel.component)) +
           " component vs " + panel.sweep + "\n";
  } else {
    const auto problem = validate(panel.params, Regime::SpinSymmetricKratzer, Component::Upper);
    const auto level = solve_level(problem, panel.level);
    const auto grid = default_grid(level, cfg.grid_points, cfg.x_min_factor, cfg.x_max_factor);
    const auto table = build_table(problem, level, grid);
    columns = {"x", "phi1_sq", "phi2_sq", "density"};
    for (std::size_t i = 0; i < grid.count; ++i) {
      records.push_back({{"x", num(table.x[i])},
                         {"phi1_sq", num(table.phi1[i] * table.phi1[i])},
                         {"phi2_sq", num(table.phi2[i] * table.phi2[i])},
                         {"density", num(table.density[i])}});
    }
    meta["n"] = panel.level;
    meta["E"] = energy_out(cfg, level.energy);
    meta["norm_constant"] = table.norm_constant;
    meta["nodes"] = table.nodes;
    meta["phi2_source"] = table.phi2_source;
    meta["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"points", grid.count}};
    plot = "data " + data_name + "\nx x\ny phi1_sq phi2_sq density\nxlabel x\nylabel density\ntitle n = " +
           std::to_string(panel.level) + "\n";
  }
  io::write_atomic(dir / data_name, encode(cfg, columns, records));
  io::write_atomic(dir / (stem + ".meta.json"), meta.dump(1) + "\n");
  io::write_atomic(dir / (stem + ".plot"), plot);
}

int cmd_figure(const RunConfig& cfg) {
  const auto panels = figure_panels();
  std::vector<FigurePanel> chosen;
  for (const auto& p : panels) {
    if (cfg.figure_id == "all" || cfg.figure_id == p.id) chosen.push_back(p);
  }
  if (chosen.empty()) {
    throw Error(ErrorCode::InvalidConfig, "unknown figure id '" + cfg.figure_id + "'");
  }
  for (const auto& p : chosen) write_figure(cfg, p);
  std::cerr << "figure: wrote " << chosen.size() << " panel(s) to " << cfg.out_dir << '\n';
  return kExitOk;
}

void write_effective_config(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["M"] = cfg.params.mass;
  j["D"] = cfg.params.dissociation;
  j["a"] = cfg.params.length;
  j["b"] = cfg.params.pseudoscalar;
  j["q"] = cfg.params.shape;
  j["regime"] = cfg.regime;
  j["component"] = cfg.component;
  j["n"] = cfg.levels;
  j["format"] = cfg.format;
  j["strict-b"] = cfg.strict_b;
  j["in-units-of-M"] = cfg.units_of_m;
  j["sign"] = cfg.sign;
  j["grid-points"] = cfg.grid_points;
  j["x-min-factor"] = cfg.x_min_factor;
  j["x-max-factor"] = cfg.x_max_factor;
  j["oracle-points"] = cfg.oracle.points;
  j["oracle-domain-factor"] = cfg.oracle.domain_factor;
  j["oracle-x-min-factor"] = cfg.oracle.x_min_factor;
  j["oracle-tol"] = cfg.oracle.eigen_tol;
  j["richardson"] = cfg.richardson;
  j["tolerance"] = cfg.oracle.pass_tolerance;
  j["inject-energy-offset"] = cfg.inject_offset;
  if (!cfg.figure_id.empty()) j["id"] = cfg.figure_id;
  io::write_atomic(cfg.emit_config, j.dump(1) + "\n");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Bound states of the 1+1 Dirac equation with Kratzer and pseudoscalar Coulomb terms"};
  app.option_defaults()->take_last();
  app.config_formatter(std::make_shared<JsonOrKeyValueConfig>());
  app.set_config("--config", "", "JSON object or key=value file with option values");
  app.require_subcommand(1);

  const std::string g_model = "Model";
  app.add_option("--M", cfg.params.mass, "mass")->group(g_model);
  app.add_option("--D", cfg.params.dissociation, "dissociation energy")->group(g_model);
  app.add_option("--a", cfg.params.length, "length parameter")->group(g_model);
  app.add_option("--b", cfg.params.pseudoscalar, "pseudoscalar strength")->group(g_model);
  app.add_option("--q", cfg.params.shape, "Kratzer shape parameter")->group(g_model);
  app.add_option("--regime", cfg.regime)
      ->check(CLI::IsMember({"kratzer", "coulomb", "scalar", "nonrel"}))
      ->group(g_model);
  app.add_option("--component", cfg.component)->check(CLI::IsMember({"upper", "lower"}))->group(g_model);
  app.add_option("--n", cfg.levels, "level or range i..j")->group(g_model);
  app.add_option("--strict-b", cfg.strict_b, "require b > 1/2 for the lower Coulomb component")
      ->check(CLI::IsMember({"on", "off"}))
      ->group(g_model);
  app.add_option("--sign", cfg.sign, "branch of the scalar-only spectrum")
      ->check(CLI::IsMember({1, -1}))
      ->group(g_model);

  const std::string g_out = "Output";
  app.add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}))->group(g_out);
  app.add_option("--out", cfg.out, "output file (standard output when absent)")->group(g_out);
  app.add_flag("--in-units-of-M", cfg.units_of_m, "report energies divided by M")->group(g_out);
  app.add_option("--emit-config", cfg.emit_config, "write the effective options as JSON")
      ->configurable(false)
      ->group(g_out);

  const std::string g_grid = "Wavefunction grid";
  app.add_option("--grid-points", cfg.grid_points)->group(g_grid);
  app.add_option("--x-min-factor", cfg.x_min_factor, "x_min * kappa")->group(g_grid);
  app.add_option("--x-max-factor", cfg.x_max_factor, "x_max * kappa")->group(g_grid);

  const std::string g_oracle = "Oracle";
  app.add_option("--oracle-points", cfg.oracle.points)->group(g_oracle);
  app.add_option("--oracle-domain-factor", cfg.oracle.domain_factor)->group(g_oracle);
  app.add_option("--oracle-x-min-factor", cfg.oracle.x_min_factor)->group(g_oracle);
  app.add_option("--oracle-tol", cfg.oracle.eigen_tol, "bisection width in kappa^2")->group(g_oracle);
  app.add_option("--richardson", cfg.richardson)->check(CLI::IsMember({"on", "off"}))->group(g_oracle);
  app.add_option("--tolerance", cfg.oracle.pass_tolerance, "relative error allowed on eps")
      ->group(g_oracle);
  app.add_option("--inject-energy-offset", cfg.inject_offset,
                 "shift the analytic energy (units of M) before checking")
      ->group(g_oracle);

  const std::string g_fig = "Figure";
  app.add_option("--id", cfg.figure_id, "1a 1b 1c 2a 2b 2c 2d 3a 3b 3c or all")->group(g_fig);
  app.add_option("--out-dir", cfg.out_dir)->configurable(false)->group(g_fig);

  auto* spectrum = app.add_subcommand("spectrum", "energy levels");
  auto* wavefunction = app.add_subcommand("wavefunction", "sampled spinor components of one level");
  auto* verify = app.add_subcommand("verify", "compare levels with the Sturm oracle");
  auto* figure = app.add_subcommand("figure", "datasets for the published figures");
  for (auto* sub : {spectrum, wavefunction, verify, figure}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!cfg.emit_config.empty()) write_effective_config(cfg);
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (wavefunction->parsed()) return cmd_wavefunction(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (cfg.figure_id.empty()) throw Error(ErrorCode::InvalidConfig, "figure needs --id");
    return cmd_figure(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitUsage : kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace dirac1d
