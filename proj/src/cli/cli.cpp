#include "fbm/cli/cli.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "fbm/asymptotics/asymptotics.h"
#include "fbm/core/kernel.h"
#include "fbm/errors.h"
#include "fbm/io/csv.h"
#include "fbm/oracle/oracle.h"
#include "fbm/prediction/prediction.h"

namespace fbm::cli {

namespace {

struct RunConfig {
  std::string command;
  std::optional<double> hurst;
  std::optional<double> u;
  std::optional<double> t;
  std::optional<double> s;
  std::string grid;
  std::string input_path;
  std::string output_path;
  std::string summary_path;
  std::string sweep = "cov";
  std::string regime;
  std::uint64_t seed = 42;
  std::size_t n_paths = 1000;
  std::optional<double> quad_tol;
  double corrupt_dh = 1.0;
};

struct Grid {
  double start;
  double end;
  std::size_t count;
};

Grid parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) {
    throw InputError("--grid: expected start:end:count, got '" + spec + "'");
  }
  try {
    std::size_t used = 0;
    Grid g{std::stod(parts[0], &used), 0.0, 0};
    if (used != parts[0].size()) throw std::invalid_argument("start");
    g.end = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("end");
    const long long c = std::stoll(parts[2], &used);
    if (used != parts[2].size() || c < 1) throw std::invalid_argument("count");
    g.count = static_cast<std::size_t>(c);
    if (!std::isfinite(g.start) || !std::isfinite(g.end)) throw std::invalid_argument("finite");
    return g;
  } catch (const std::logic_error&) {
    throw InputError("--grid: malformed '" + spec + "' (count must be an integer >= 1)");
  }
}

std::vector<double> linear_points(const Grid& g) {
  std::vector<double> v(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    v[i] = g.count == 1 ? g.start
                        : g.start + (g.end - g.start) * static_cast<double>(i) / static_cast<double>(g.count - 1);
  }
  if (g.count > 1) v.back() = g.end;
  return v;
}

std::vector<double> geometric_points(const Grid& g) {
  if (!(g.start > 0.0) || !(g.end > 0.0)) {
    throw InputError("--grid: geometric sweeps need positive start and end");
  }
  std::vector<double> v(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double f = g.count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(g.count - 1);
    v[i] = g.start * std::pow(g.end / g.start, f);
  }
  if (g.count > 1) v.back() = g.end;
  return v;
}

template <class T>
T require(const std::optional<T>& v, const char* flag) {
  if (!v) {
    throw InputError(std::string("missing required flag ") + flag);
  }
  return *v;
}

core::Hurst hurst_of(const RunConfig& cfg) { return core::Hurst(require(cfg.hurst, "--hurst")); }

numerics::QuadratureSpec quad_of(const RunConfig& cfg) {
  auto q = core::default_kernel_quadrature();
  if (cfg.quad_tol) {
    q.rel_tol = *cfg.quad_tol;
    q.validate();
  }
  return q;
}

std::vector<double> grid_of(const RunConfig& cfg) {
  if (cfg.grid.empty()) {
    throw InputError("missing required flag --grid");
  }
  return linear_points(parse_grid(cfg.grid));
}

// Output goes to --out if given; the stream is opened in binary mode so line
// endings stay LF on every platform.
class Sink {
public:
  Sink(const RunConfig& cfg, std::ostream& fallback) : out_(&fallback) {
    if (!cfg.output_path.empty()) {
      file_.open(cfg.output_path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot write " + cfg.output_path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

private:
  std::ofstream file_;
  std::ostream* out_;
};

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const core::VolterraKernel kernel(hurst_of(cfg), quad_of(cfg));
  const double t = require(cfg.t, "--t");
  const auto grid = grid_of(cfg);
  for (double s : grid) {
    if (!(s > 0.0) || !(s < t)) throw InputError("kernel: every s must lie in (0, t)");
  }
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"s", "value"});
  for (double s : grid) w.row({s, kernel(t, s)});
  return kSuccess;
}

int cmd_cov(const RunConfig& cfg, std::ostream& out) {
  const core::Hurst h = hurst_of(cfg);
  const double t = require(cfg.t, "--t");
  const auto grid = grid_of(cfg);
  if (!(t >= 0.0)) throw InputError("cov: t must be >= 0");
  for (double s : grid) {
    if (!(s >= 0.0)) throw InputError("cov: every s must be >= 0");
  }
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"s", "value"});
  for (double s : grid) w.row({s, core::fbm_cov(t, s, h)});
  return kSuccess;
}

int cmd_cond_cov(const RunConfig& cfg, std::ostream& out) {
  const core::VolterraKernel kernel(hurst_of(cfg), quad_of(cfg));
  const double t = require(cfg.t, "--t");
  const double s = require(cfg.s, "--s");
  const auto grid = grid_of(cfg);
  for (double u : grid) {
    if (!(u > 0.0) || !(u <= std::min(t, s))) throw InputError("cond-cov: every u must lie in (0, min(t,s)]");
  }
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"u", "value"});
  for (double u : grid) w.row({u, prediction::cond_cov(t, s, u, kernel)});
  return kSuccess;
}

prediction::ObservedPath input_path_of(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw InputError("missing required flag --in");
  return io::read_path_csv_file(cfg.input_path);
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  const core::Hurst h = hurst_of(cfg);
  const auto path = input_path_of(cfg);
  const auto grid = grid_of(cfg);
  if (cfg.u && *cfg.u != path.u()) {
    throw InputError("--u does not match the last observation time of --in");
  }
  for (double t : grid) {
    if (!(t >= path.u())) throw InputError("predict: grid points must be >= u = " + io::format_double(path.u()));
  }
  const auto law = prediction::build_conditional_law(path, grid, h, quad_of(cfg));
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"t", "mean", "std"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w.row({grid[i], law.mean[i], std::sqrt(std::max(0.0, law.cov(i, i)))});
  }
  return kSuccess;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const core::Hurst h = hurst_of(cfg);
  const auto grid = grid_of(cfg);
  if (cfg.n_paths < 1) throw InputError("--paths must be >= 1");
  linalg::Matrix paths;
  if (!cfg.input_path.empty()) {
    const auto path = input_path_of(cfg);
    for (double t : grid) {
      if (!(t >= path.u())) throw InputError("simulate: grid points must be >= u");
    }
    const auto law = prediction::build_conditional_law(path, grid, h, quad_of(cfg));
    paths = prediction::sample_conditional_paths(law, cfg.n_paths, cfg.seed);
  } else {
    const auto gg = oracle::build_grid_gaussian(grid, h);
    // sample_fbm needs two paths at least; extra rows are dropped.
    const auto all = oracle::sample_fbm(gg, oracle::MCConfig{std::max<std::size_t>(cfg.n_paths, 2), cfg.seed, false});
    paths = linalg::Matrix(cfg.n_paths, grid.size());
    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
      for (std::size_t i = 0; i < grid.size(); ++i) paths(p, i) = all(p, i);
    }
  }
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"path", "t", "value"});
  for (std::size_t p = 0; p < paths.rows(); ++p) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      w.row({static_cast<double>(p), grid[i], paths(p, i)});
    }
  }
  return kSuccess;
}

void write_summary(const RunConfig& cfg, const asymptotics::AsymptoticReport& rep) {
  std::string path = cfg.summary_path;
  if (path.empty()) {
    if (cfg.output_path.empty()) return;
    path = cfg.output_path + ".summary.csv";
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write " + path);
  io::CsvWriter w(f, {"name", "value"});
  w.text_row({"regime", std::string(asymptotics::to_string(rep.regime))});
  w.labelled_row("fitted_exponent", {rep.fitted_exponent});
  w.labelled_row("fitted_constant", {rep.fitted_constant});
  w.labelled_row("extrapolated_constant", {rep.extrapolated_constant});
  w.labelled_row("target_exponent", {rep.target_exponent});
  w.labelled_row("target_constant", {rep.target_constant});
  w.labelled_row("r_squared", {rep.r_squared});
}

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out) {
  using asymptotics::Regime;
  const core::Hurst h = hurst_of(cfg);
  const auto quad = quad_of(cfg);
  const core::VolterraKernel kernel(h, quad);

  if (cfg.sweep == "cov") {
    const auto grid = cfg.grid.empty() ? linear_points({0.01, 0.99, 99}) : grid_of(cfg);
    for (double u : grid) {
      if (!(u > 0.0) || !(u <= 1.0)) throw InputError("asymptotics: cov sweep needs u in (0, 1]");
    }
    Sink sink(cfg, out);
    io::CsvWriter w(sink.stream(), {"u", "value"});
    for (double u : grid) w.row({u, prediction::cond_cov(1.0, 1.0, u, kernel)});
    return kSuccess;
  }
  if (cfg.sweep != "g" && cfg.sweep != "f") {
    throw InputError("--sweep must be one of cov, g, f");
  }
  const bool g_sweep = cfg.sweep == "g";
  Regime regime;
  if (!cfg.regime.empty()) {
    regime = asymptotics::regime_from_string(cfg.regime);
  } else if (g_sweep) {
    regime = h.value() < 0.5 ? Regime::NoInfoSmallH : Regime::NoInfoLargeH;
  } else {
    regime = Regime::FullInfoDiag;
  }
  const bool no_info = regime == Regime::NoInfoSmallH || regime == Regime::NoInfoLargeH;
  if (g_sweep != no_info) {
    throw RegimeError("asymptotics: --sweep " + cfg.sweep + " does not match regime " +
                      std::string(asymptotics::to_string(regime)));
  }
  if (h.near_half()) {
    throw RegimeError("asymptotics: g and f sweeps need H away from 1/2");
  }
  if (regime == Regime::NoInfoSmallH && !(h.value() < 0.5)) throw RegimeError("no-info-smallH needs H < 1/2");
  if (regime == Regime::NoInfoLargeH && !(h.value() > 0.5)) throw RegimeError("no-info-largeH needs H > 1/2");
  const double t = cfg.t.value_or(regime == Regime::FullInfoOffDiag ? 2.0 : 1.0);
  const double s = cfg.s.value_or(1.0);

  const auto distances = geometric_points(parse_grid(cfg.grid.empty() ? "1e-2:1.25e-3:7" : cfg.grid));
  const auto rep = asymptotics::asymptotic_sweep(regime, h, t, s, distances, quad);
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"u", "value"});
  for (std::size_t i = 0; i < rep.u_grid.size(); ++i) {
    w.row({rep.u_grid[i], rep.diagnostic[i]});
  }
  write_summary(cfg, rep);
  return kSuccess;
}

// ---- verify ------------------------------------------------------------

struct Check {
  std::string name;
  std::string status; // pass, fail or skip
  double observed;
  double tolerance;
};

Check bound(std::string name, double observed, double tolerance) {
  const bool ok = std::isfinite(observed) && observed <= tolerance;
  return {std::move(name), ok ? "pass" : "fail", observed, tolerance};
}

std::string tag(core::Hurst h) {
  std::ostringstream os;
  os << "[H=" << h.value() << "]";
  return os.str();
}

void verify_hurst(core::Hurst h, const RunConfig& cfg, std::vector<Check>& checks) {
  auto constants = core::kernel_constants(h);
  constants.d *= cfg.corrupt_dh;
  const core::VolterraKernel kernel(h, constants, quad_of(cfg));
  const std::string suffix = tag(h);

  double iso = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const double target = std::pow(t, 2.0 * h.value());
    iso = std::max(iso, std::abs(kernel.product_integral(t, t, 0.0, t) - target) / target);
  }
  checks.push_back(bound("isometry" + suffix, iso, 1e-4));

  const double lattice[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  double cov = 0.0;
  for (double t : lattice) {
    for (double s : lattice) {
      const double r = core::fbm_cov(t, s, h);
      cov = std::max(cov, std::abs(kernel.product_integral(t, s, 0.0, std::min(t, s)) - r) / r);
    }
  }
  checks.push_back(bound("covariance-reproduction" + suffix, cov, 1e-4));

  double two_form = 0.0;
  for (double t : {1.0, 1.5, 2.0}) {
    for (double s : {1.0, 1.5, 2.0}) {
      for (double u : {0.25, 0.5, 0.9}) {
        const auto f = prediction::cond_cov_forms(t, s, u, kernel);
        two_form = std::max(two_form, std::abs(f.value - f.diagnostic) / std::max(1.0, core::fbm_cov(t, s, h)));
      }
    }
  }
  checks.push_back(bound("two-form" + suffix, two_form, prediction::kTwoFormTolerance));

  std::vector<double> future;
  for (int k = 1; k <= 16; ++k) future.push_back(1.0 + k / 16.0);
  const auto table = oracle::refinement_study(h, 1.0, future, {64, 128, 256, 512}, cfg.seed);
  checks.push_back(bound("oracle-covariance" + suffix, table.rows.back().cov_error, 5e-3));
  checks.push_back(bound("oracle-mean" + suffix, table.rows.back().mean_error, 5e-3));
  checks.push_back({"oracle-refinement-monotone" + suffix, table.decreasing() ? "pass" : "fail",
                    table.decreasing() ? 0.0 : 1.0, 0.0});

  using asymptotics::Regime;
  std::vector<std::pair<Regime, std::pair<double, double>>> regimes;
  if (h.near_half()) {
    checks.push_back({"asymptotic-fit" + suffix, "skip", 0.0, 0.0});
    return;
  }
  regimes.push_back({h.value() < 0.5 ? Regime::NoInfoSmallH : Regime::NoInfoLargeH, {1.0, 1.0}});
  regimes.push_back({Regime::FullInfoDiag, {1.0, 1.0}});
  regimes.push_back({Regime::FullInfoOffDiag, {2.0, 1.0}});
  const auto distances = asymptotics::geometric_distances(1e-2, std::sqrt(0.5), 7);
  for (const auto& [regime, ts] : regimes) {
    const std::string name = "asymptotic-" + std::string(asymptotics::to_string(regime)) + suffix;
    try {
      const auto rep = asymptotics::asymptotic_sweep(regime, h, ts.first, ts.second, distances, quad_of(cfg));
      checks.push_back(bound(name + "-exponent", std::abs(rep.fitted_exponent - rep.target_exponent), 0.05));
      checks.push_back(bound(name + "-constant",
                             std::abs(rep.extrapolated_constant / rep.target_constant - 1.0), 0.05));
    } catch (const FitError&) {
      checks.push_back({name, "fail", std::numeric_limits<double>::quiet_NaN(), 0.99});
    }
  }
}

void verify_brownian(std::vector<Check>& checks) {
  const core::Hurst half(0.5);
  std::vector<double> times{0.0}, values{0.0};
  for (int k = 1; k <= 8; ++k) {
    times.push_back(k / 8.0);
    values.push_back(std::sin(3.0 * k) * 0.5);
  }
  const prediction::ObservedPath path(times, values);
  double worst = 0.0;
  for (double t : {1.0, 1.25, 2.0}) {
    worst = std::max(worst, std::abs(prediction::cond_mean(path, t, half) - path.last_value()));
    for (double s : {1.0, 1.5, 3.0}) {
      worst = std::max(worst, std::abs(prediction::cond_cov(t, s, 1.0, half) - (std::min(t, s) - 1.0)));
    }
  }
  checks.push_back({"brownian-exactness", worst == 0.0 ? "pass" : "fail", worst, 0.0});
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool color) {
  std::vector<Check> checks;
  verify_brownian(checks);
  std::vector<double> hs = cfg.hurst ? std::vector<double>{*cfg.hurst} : std::vector<double>{0.25, 0.75};
  for (double hv : hs) {
    verify_hurst(core::Hurst(hv), cfg, checks);
  }
  Sink sink(cfg, out);
  io::CsvWriter w(sink.stream(), {"name", "status", "observed", "tolerance"});
  std::size_t failed = 0;
  for (const auto& c : checks) {
    w.text_row({c.name, c.status, io::format_double(c.observed), io::format_double(c.tolerance)});
    if (c.status == "fail") {
      ++failed;
      err << (color ? "\x1b[31mFAIL\x1b[0m " : "FAIL ") << c.name << '\n';
    }
  }
  err << checks.size() << " checks, " << failed << " failed\n";
  return failed == 0 ? kSuccess : kVerificationFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const bool color = std::getenv("NO_COLOR") == nullptr && &err == &std::cerr && ::isatty(2);
  RunConfig cfg;
  CLI::App app{"fBm kernel, conditional mean and covariance, sampling", "fbmpred"};
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.add_option("command", cfg.command, "kernel | cov | cond-cov | predict | simulate | asymptotics | verify")
      ->required()
      ->check(CLI::IsMember({"kernel", "cov", "cond-cov", "predict", "simulate", "asymptotics", "verify"}));
  app.add_option("--hurst", cfg.hurst, "Hurst index H in (0,1)");
  app.add_option("--u", cfg.u, "Conditioning horizon (must match the input path when given)");
  app.add_option("--t", cfg.t, "First time argument");
  app.add_option("--s", cfg.s, "Second time argument");
  app.add_option("--grid", cfg.grid, "start:end:count");
  app.add_option("--in", cfg.input_path, "Observed path CSV with header time,value");
  app.add_option("--out", cfg.output_path, "Output CSV (default: stdout)");
  app.add_option("--summary", cfg.summary_path, "Fit summary CSV for asymptotics (default: <out>.summary.csv)");
  app.add_option("--sweep", cfg.sweep, "asymptotics sweep: cov, g or f")
      ->check(CLI::IsMember({"cov", "g", "f"}));
  app.add_option("--regime", cfg.regime, "asymptotic regime for the fit summary");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--paths", cfg.n_paths, "Number of sample paths");
  app.add_option("--quad-tol", cfg.quad_tol, "Relative tolerance for kernel quadrature");
  app.add_option("--corrupt-dh", cfg.corrupt_dh, "")->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (cfg.command == "kernel") return cmd_kernel(cfg, out);
    if (cfg.command == "cov") return cmd_cov(cfg, out);
    if (cfg.command == "cond-cov") return cmd_cond_cov(cfg, out);
    if (cfg.command == "predict") return cmd_predict(cfg, out);
    if (cfg.command == "simulate") return cmd_simulate(cfg, out);
    if (cfg.command == "asymptotics") return cmd_asymptotics(cfg, out);
    return cmd_verify(cfg, out, err, color);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const FitError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  }
}

} // namespace fbm::cli
