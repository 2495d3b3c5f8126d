// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "caption_matrix.hpp"
#include "dirac1d/error.hpp"
#include "dirac1d/oracle.hpp"
#include "dirac1d/specfun.hpp"
#include "dirac1d/spectrum.hpp"
#include "dirac1d/wavefunction.hpp"

using namespace dirac1d;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(std::string why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(std::move(why));
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("dirac1d_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string("'") + DIRAC1D_TOOL + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_args(const caption::Case& c) {
  std::ostringstream s;
  s.precision(17);
  s << "--regime " << to_string(c.regime) << " --component " << to_string(c.component) << " --M "
    << c.params.mass << " --D " << c.params.dissociation << " --a " << c.params.length << " --b "
    << c.params.pseudoscalar << " --q " << c.params.shape;
  return s.str();
}

bool no_bound_state(const Error& e) { return e.code() == ErrorCode::NoBoundState; }

// ---------------------------------------------------------------------------

Outcome oracle_agreement() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  int checked = 0, skipped = 0;
  double worst = 0.0;
  for (const auto& c : caption::cases()) {
    const auto prob = validate(c.params, c.regime, c.component);
    for (int n = 0; n <= 3; ++n) {
      try {
        const auto r = verify_level(prob, n);
        ++checked;
        worst = std::max(worst, r.rel_error);
        if (!r.pass || r.rel_error > 1e-4) o.fail(c.label + " n=" + std::to_string(n) + " rel=" + fmt(r.rel_error));
      } catch (const Error& e) {
        if (no_bound_state(e)) {
          ++skipped;
        } else {
          o.fail(c.label + " n=" + std::to_string(n) + ": " + e.what());
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > 300.0) o.fail("runtime " + fmt(secs) + " s");
  o.detail = std::to_string(checked) + " levels, " + std::to_string(skipped) + " absent, max rel " + fmt(worst) +
             ", " + fmt(secs) + " s";
  return o;
}


std::vector<PotentialParams> random_draws(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> m(0.5, 3.0), d(0.1, 5.0), a(0.1, 3.0), b(0.05, 3.0);
  std::vector<PotentialParams> out;
  for (int i = 0; i < 50; ++i) out.push_back({m(rng), d(rng), a(rng), b(rng), 0.0});
  return out;
}

Outcome coulomb_reduction() {
  Outcome o;
  double worst = 0.0;
  for (const auto& p : random_draws(2024)) {
    for (auto comp : {Component::Upper, Component::Lower}) {
      for (int n = 0; n <= 5; ++n) {
        const double k = solve_level_kratzer(p, comp, n).energy;
        const double e = level_coulomb(p, comp, n).energy;
        // relative, with a floor of 1e-2 M for levels sitting near E = 0
        const double rel = std::abs(k - e) / std::max(std::abs(e), 1e-2 * p.mass);
        worst = std::max(worst, rel);
        if (rel > 1e-10) o.fail("n=" + std::to_string(n) + " rel=" + fmt(rel));
      }
    }
  }
  o.detail = "50 draws x 2 components x n=0..5, max rel " + fmt(worst);
  return o;
}

Outcome b_shift() {
  Outcome o;
  double worst = 0.0;
  for (auto p : random_draws(2024)) {
    auto shifted = p;
    shifted.pseudoscalar += 1.0;
    for (int n = 0; n <= 5; ++n) {
      const double gap = std::abs(solve_level_kratzer(p, Component::Upper, n).energy -
                                  solve_level_kratzer(shifted, Component::Lower, n).energy) /
                         p.mass;
      worst = std::max(worst, gap);
      if (gap > 1e-12) o.fail("n=" + std::to_string(n) + " gap/M=" + fmt(gap));
    }
  }
  o.detail = "50 draws x n=0..5, max |dE|/M " + fmt(worst);
  return o;
}

Outcome nonrel_limit() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> b(0.05, 2.0), m(0.5, 2.0), frac(0.01, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    for (int n = 0; n <= 3; ++n) {
      PotentialParams p{m(rng), 1.0, 1.0, b(rng), 0.0};
      const double k = n + 1.0 + p.pseudoscalar;
      const double lambda = 0.1 * k * frac(rng);
      p.dissociation = lambda;
      const double gap = std::abs(level_coulomb(p, Component::Upper, n).energy - level_nonrel(p, n).energy);
      const double bound = 3.0 * p.mass * std::pow(lambda / k, 4);
      worst = std::max(worst, gap / bound);
      if (gap > bound) o.fail("n=" + std::to_string(n) + " gap=" + fmt(gap) + " bound=" + fmt(bound));
    }
  }
  o.detail = "50 draws x n=0..3, max gap/bound " + fmt(worst);
  return o;
}

Outcome node_theorem() {
  Outcome o;
  int checked = 0;
  for (const auto& c : caption::cases()) {
    const auto prob = validate(c.params, c.regime, c.component);
    for (int n = 0; n <= 6; ++n) {
      EnergyLevel lv;
      try {
        lv = solve_level(prob, n);
      } catch (const Error& e) {
        if (!no_bound_state(e)) o.fail(c.label + ": " + e.what());
        continue;
      }
      const auto s = eval_component(lv, c.params, default_grid(lv));
      const int nodes = count_nodes(s);
      ++checked;
      if (nodes != n) o.fail(c.label + " n=" + std::to_string(n) + " nodes=" + std::to_string(nodes));
    }
  }
  o.detail = std::to_string(checked) + " eigenfunctions";
  return o;
}

Outcome ode_residuals() {
  Outcome o;
  int checked = 0, insensitive = 0;
  double worst = 0.0, weakest_shift = std::numeric_limits<double>::infinity();
  for (const auto& c : caption::cases()) {
    const auto prob = validate(c.params, c.regime, c.component);
    for (int n = 0; n <= 3; ++n) {
      EnergyLevel lv;
      try {
        lv = solve_level(prob, n);
      } catch (const Error& e) {
        if (!no_bound_state(e)) o.fail(c.label + ": " + e.what());
        continue;
      }
      const auto g = default_grid(lv);
      const auto s = eval_component(lv, c.params, g);
      const auto r = ode_residual(lv, s, c.params, g);
      auto off = lv;
      off.energy += 0.01 * c.params.mass;
      const auto shifted = ode_residual(off, s, c.params, g);
      ++checked;
      worst = std::max(worst, r.value);
      weakest_shift = std::min(weakest_shift, shifted.value);
      if (r.degenerate || r.value > 1e-5) o.fail(c.label + " n=" + std::to_string(n) + " res=" + fmt(r.value));
      if (shifted.value <= 1e-2) {
        ++insensitive;
        o.fail(c.label + " n=" + std::to_string(n) + " shifted res=" + fmt(shifted.value));
      }
    }
  }
  o.detail = std::to_string(checked) + " levels, max residual " + fmt(worst) + ", min perturbed " +
             fmt(weakest_shift);
  if (insensitive > 0) {
    // for the non-relativistic bracket U does not depend on E, so the shifted
    // residual is exactly 2M dE / |eps + 2M dE|; deep levels cannot reach 1e-2
    o.detail += "; " + std::to_string(insensitive) + " levels with perturbed residual <= 1e-2";
  }
  return o;
}

Outcome normalization() {
  Outcome o;
  const double inf = std::numeric_limits<double>::infinity();
  int checked = 0, not_emitted = 0;
  double worst = 0.0;
  for (const auto& c : caption::cases()) {
    const auto prob = validate(c.params, c.regime, c.component);
    for (int n = 0; n <= 3; ++n) {
      EnergyLevel lv;
      WavefunctionTable t;
      try {
        lv = solve_level(prob, n);
        t = build_table(prob, lv, default_grid(lv));
      } catch (const Error& e) {
        // absent levels and scalar-only partners that cross a pole produce no table
        if (no_bound_state(e) || e.code() == ErrorCode::SingularDenominator) {
          ++not_emitted;
        } else {
          o.fail(c.label + ": " + e.what());
        }
        continue;
      }
      const double n2 = t.norm_constant * t.norm_constant;
      auto density = [&](double s) {
        const double x = std::pow(s, 5);
        if (x < 1e-300) return 0.0;
        const double phi = component_value(lv, x);
        double partner = 0.0;
        if (t.phi2_source == "partner") {
          partner = is_relativistic(lv.regime)
                        ? (component_slope(lv, x) + c.params.pseudoscalar / x * phi) / (lv.energy + c.params.mass)
                        : component_slope(lv, x) / (2 * c.params.mass);
        }
        return n2 * (phi * phi + partner * partner) * 5 * std::pow(s, 4);
      };
      specfun::QuadratureSpec spec;
      spec.rel_tol = 1e-12;
      const double total = specfun::integrate_halfline(density, 0.0, inf, spec).value;
      ++checked;
      worst = std::max(worst, std::abs(total - 1.0));
      if (std::abs(total - 1.0) > 1e-8) o.fail(c.label + " n=" + std::to_string(n) + " total=" + fmt(total));
    }
  }
  o.detail = std::to_string(checked) + " tables, max |norm - 1| " + fmt(worst) + ", " + std::to_string(not_emitted) +
             " not emitted";
  return o;
}

Outcome scalar_boundary() {
  Outcome o;
  struct Edge {
    double d, a, b;
    int n;
  };
  // 2Da = n + 1 + b, all exactly representable
  const Edge edges[] = {{5.0, 1.0, 0.0, 9}, {2.75, 1.0, 0.5, 4}, {1.625, 1.0, 0.25, 2}, {0.5, 1.0, 0.0, 0},
                        {2.0, 0.5, 1.0, 0}, {3.0, 1.5, 0.0, 8}};
  for (const auto& e : edges) {
    const PotentialParams p{1.0, e.d, e.a, e.b, 0.0};
    const auto up = level_scalar_only(p, e.n, +1);
    const auto down = level_scalar_only(p, e.n, -1);
    if (up.energy != 0.0 || down.energy != 0.0)
      o.fail("n=" + std::to_string(e.n) + " E=" + fmt(up.energy) + "/" + fmt(down.energy));
    // one step inside the forbidden side
    PotentialParams deeper = p;
    deeper.dissociation = std::nextafter(p.dissociation, 10.0 * p.dissociation);
    for (int sign : {+1, -1}) {
      try {
        level_scalar_only(deeper, e.n, sign);
        o.fail("n=" + std::to_string(e.n) + " beyond the edge still bound");
      } catch (const Error& err) {
        if (!no_bound_state(err)) o.fail(std::string("wrong error: ") + err.what());
      }
    }
  }
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int raised = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = static_cast<int>(u(rng) * 6);
    const double b = 2.0 * u(rng);
    const double a = 0.2 + u(rng);
    const double d = (n + 1 + b) / (2 * a) * (1.0 + 1e-6 + u(rng));
    try {
      level_scalar_only({1.0, d, a, b, 0.0}, n, +1);
      o.fail("random draw above the edge still bound");
    } catch (const Error& err) {
      if (no_bound_state(err)) ++raised;
    }
  }
  if (raised != 200) o.fail("NoBoundState raised for " + std::to_string(raised) + "/200");
  o.detail = std::to_string(std::size(edges)) + " exact edges, 200 random draws beyond the edge";
  return o;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

Outcome monotonicity() {
  Outcome o;
  int spectra = 0;
  for (const auto& c : caption::cases()) {
    if (!is_relativistic(c.regime)) continue;
    const auto prob = validate(c.params, c.regime, c.component);
    const auto entries = spectrum_range(prob, 0, 20);
    std::optional<double> prev;
    for (const auto& e : entries) {
      if (!e.level) continue;
      const double E = e.level->energy;
      if (!(E < c.params.mass)) o.fail(c.label + " n=" + std::to_string(e.n) + " E >= M");
      if (prev && !(*prev < E)) o.fail(c.label + " n=" + std::to_string(e.n) + " not increasing");
      prev = E;
    }
    ++spectra;
  }
  const auto dir = scratch() / "figures";
  int points = 0, empty = 0;
  if (run_tool("figure --id all --format csv --out-dir '" + dir.string() + "'") != 0) {
    o.fail("figure command failed");
  } else {
    for (const char* id : {"1a", "1b", "1c", "2a", "2b", "2c", "2d"}) {
      const auto rows = read_csv(dir / ("fig" + std::string(id) + ".csv"));
      if (rows.size() < 2) o.fail(std::string("fig") + id + " missing");
      for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t k = 1; k < rows[i].size(); ++k) {
          if (rows[i][k].empty()) {
            ++empty;
            o.fail(std::string("fig") + id + " row " + std::to_string(i) + " has no value");
            continue;
          }
          double v = 0.0;
          std::from_chars(rows[i][k].data(), rows[i][k].data() + rows[i][k].size(), v);
          ++points;
          if (!(std::abs(v) < 1.0)) o.fail(std::string("fig") + id + " |E| >= M at row " + std::to_string(i));
        }
      }
    }
  }
  o.detail = std::to_string(spectra) + " spectra n=0..20, " + std::to_string(points) + " sweep values, " +
             std::to_string(empty) + " missing";
  return o;
}

Outcome special_functions() {
  Outcome o;
  using namespace specfun;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ys(0.0, 50.0);
  double worst_kummer = 0.0;
  for (double alpha : {-0.5, 0.0, 0.3, 1.7, 4.0}) {
    for (int n = 0; n <= 12; ++n) {
      const double c = std::exp(log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0) - log_gamma(alpha + 1.0));
      for (int draw = 0; draw < 40; ++draw) {
        const double y = ys(rng);
        const double lag = laguerre(n, alpha, y);
        const double kum = c * kummer_polynomial(n, alpha + 1.0, y);
        double term = 1.0, scale = 1.0;
        for (int k = 0; k < n; ++k) {
          term *= std::abs((k - n) / ((alpha + 1.0 + k) * (k + 1.0)) * y);
          scale += term;
        }
        worst_kummer = std::max(worst_kummer, std::abs(lag - kum) / std::max(std::abs(lag), c * scale));
      }
    }
  }
  if (worst_kummer > 1e-10) o.fail("Kummer-Laguerre " + fmt(worst_kummer));

  const double inf = std::numeric_limits<double>::infinity();
  double worst_orth = 0.0;
  for (double alpha : {0.0, 0.3, 1.7}) {
    for (int n = 0; n <= 5; ++n) {
      for (int m = n; m <= 5; ++m) {
        const double v = integrate_halfline(
                             [&](double y) {
                               return std::exp(-y) * std::pow(y, alpha) * laguerre(n, alpha, y) * laguerre(m, alpha, y);
                             },
                             0.0, inf)
                             .value;
        const double expected = n == m ? std::exp(log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0)) : 0.0;
        const double err = n == m ? std::abs(v / expected - 1.0) : std::abs(v);
        worst_orth = std::max(worst_orth, err);
      }
    }
  }
  if (worst_orth > 1e-8) o.fail("orthogonality " + fmt(worst_orth));

  const double pi = std::numbers::pi;
  const std::size_t count = 32768;
  std::vector<double> box(count, 0.0), osc(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = 20.0 * i / (count - 1.0);
    osc[i] = x * x;
  }
  double worst_sturm = 0.0;
  for (int k = 1; k <= 3; ++k)
    worst_sturm = std::max(worst_sturm, std::abs(sturm_eigenvalue(box, 0.0, pi, k - 1) - k * k));
  worst_sturm = std::max(worst_sturm, std::abs(sturm_eigenvalue(osc, 0.0, 20.0, 0) - 3.0));
  if (worst_sturm > 1e-5) o.fail("Sturm " + fmt(worst_sturm));
  o.detail = "Kummer " + fmt(worst_kummer) + ", orthogonality " + fmt(worst_orth) + ", Sturm " + fmt(worst_sturm);
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto cases = caption::cases();
  auto suite = [&](const fs::path& dir) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto out = dir / ("verify_" + std::to_string(i) + ".json");
      const int code = run_tool("verify " + cli_args(cases[i]) + " --n 0..3 --out '" + out.string() + "'");
      if (code != 0) o.fail(cases[i].label + " exit " + std::to_string(code));
    }
  };
  const auto first = scratch() / "run1";
  const auto second = scratch() / "run2";
  suite(first);
  suite(second);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(first)) {
    const auto other = second / entry.path().filename();
    ++files;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) o.fail(entry.path().filename().string() + " differs");
  }
  if (files != cases.size()) o.fail("expected " + std::to_string(cases.size()) + " files, got " + std::to_string(files));
  o.detail = std::to_string(files) + " verify outputs compared";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // --expect-fail N marks a criterion known to be unattainable; it is still
  // reported as FAIL, but the exit status only flags surprises
  std::vector<std::size_t> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected.push_back(static_cast<std::size_t>(std::stoul(argv[++i])));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N]...\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle agreement", oracle_agreement},
      {"closed-form reduction at q = 0", coulomb_reduction},
      {"b -> b + 1 degeneracy", b_shift},
      {"non-relativistic consistency", nonrel_limit},
      {"node count", node_theorem},
      {"ODE residual and sensitivity", ode_residuals},
      {"normalization", normalization},
      {"scalar-only boundary", scalar_boundary},
      {"monotonicity and bounds", monotonicity},
      {"special functions and Sturm solver", special_functions},
      {"determinism", determinism},
  };
  int surprises = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("unexpected exception: ") + e.what());
    }
    const bool known = std::find(expected.begin(), expected.end(), i + 1) != expected.end();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    if (known) std::cout << (o.pass ? " [expected to fail, now passes]" : " [known failure]");
    std::cout << '\n';
    for (const auto& f : o.failures) std::cout << "    " << f << '\n';
    std::cout.flush();
    if (o.pass == known) ++surprises;
  }
  fs::remove_all(scratch());
  return surprises == 0 ? 0 : 1;
}
