#include "ohbk/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "ohbk/csv.hpp"
#include "ohbk/errors.hpp"
#include "ohbk/experiments.hpp"
#include "ohbk/solver.hpp"
#include "ohbk/theory.hpp"

#ifndef OHBK_VERSION
#define OHBK_VERSION "dev"
#endif

namespace ohbk::cli {

std::string format_value(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

// Shortest representation that parses back to the same double; used for flags.
std::string format_flag(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_flag(values[i]);
    } else {
      s += std::to_string(values[i]);
    }
  }
  return s;
}

std::string quote_if_needed(const std::string& token) {
  if (token.find_first_of(" \t\"'") == std::string::npos && !token.empty()) return token;
  std::string q = "\"";
  for (char c : token) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

// Fully resolved flags of one invocation, rendered as the manifest header.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void flag(const std::string& name, const std::string& value) {
    flags_.push_back("--" + name);
    flags_.push_back(value);
  }
  void flag(const std::string& name, double value) { flag(name, format_flag(value)); }
  void flag(const std::string& name, std::size_t value) { flag(name, std::to_string(value)); }
  void toggle(const std::string& name) { flags_.push_back("--" + name); }
  void note(const std::string& line) { notes_.push_back(line); }

  void write(std::ostream& os) const {
    os << "# ohbk " << OHBK_VERSION << "\n";
    os << "# command: " << command_;
    for (const auto& f : flags_) os << ' ' << quote_if_needed(f);
    os << "\n";
    for (const auto& n : notes_) os << "# " << n << "\n";
  }

 private:
  std::string command_;
  std::vector<std::string> flags_;
  std::vector<std::string> notes_;
};

struct SourceFlags {
  std::string source = "uniform";
  std::size_t n = 50;
  double lo = 0.0;
  double hi = 1.0;
  std::string csv_path;
  std::string row_mode = "once";
  bool skip_header = false;
  std::string delimiter = ",";
  std::string missing = "?";
  std::string drop_cols = "0";
  std::vector<std::size_t> cols;

  void add_to(CLI::App* app) {
    app->add_option("--source", source, "gaussian | uniform | sphere | csv")
        ->check(CLI::IsMember({"gaussian", "uniform", "sphere", "csv"}))
        ->capture_default_str();
    app->add_option("--n", n, "signal dimension (ignored for csv)")->capture_default_str();
    app->add_option("--lo", lo, "uniform lower bound")->capture_default_str();
    app->add_option("--hi", hi, "uniform upper bound")->capture_default_str();
    app->add_option("--csv-path", csv_path, "dataset file for --source csv");
    app->add_option("--row-mode", row_mode, "cyclic | random | once")
        ->check(CLI::IsMember({"cyclic", "random", "once"}))
        ->capture_default_str();
    app->add_flag("--skip-header", skip_header, "ignore the first non-blank CSV line");
    app->add_option("--delimiter", delimiter, "CSV field delimiter")->capture_default_str();
    app->add_option("--missing", missing, "missing-value token; rows containing it are dropped")
        ->capture_default_str();
    app->add_option("--drop-cols", drop_cols, "comma-separated 0-based columns to drop, or 'none'")
        ->capture_default_str();
    app->add_option("--cols", cols, "0-based columns to keep (default: all not dropped)")
        ->delimiter(',');
  }

  void record(Manifest& m) const {
    m.flag("source", source);
    if (source == "csv") {
      m.flag("csv-path", csv_path);
      m.flag("row-mode", row_mode);
      if (skip_header) m.toggle("skip-header");
      m.flag("delimiter", delimiter);
      m.flag("missing", missing);
      m.flag("drop-cols", drop_cols);
      if (!cols.empty()) m.flag("cols", join(cols));
    } else {
      m.flag("n", n);
      if (source == "uniform") {
        m.flag("lo", lo);
        m.flag("hi", hi);
      }
    }
  }

  sources::SourceSpec build(std::uint64_t seed) const {
    const auto kind = sources::parse_source_kind(source);
    switch (kind) {
      case sources::SourceKind::gaussian: return sources::SourceSpec::gaussian(n, seed);
      case sources::SourceKind::sphere: return sources::SourceSpec::sphere(n, seed);
      case sources::SourceKind::uniform: return sources::SourceSpec::uniform(n, lo, hi, seed);
      case sources::SourceKind::dataset: break;
    }
    if (csv_path.empty()) throw ArgumentError("--source csv requires --csv-path");
    if (delimiter.size() != 1) throw ArgumentError("--delimiter must be a single character");
    sources::CsvOptions options;
    options.delimiter = delimiter[0];
    options.skip_header = skip_header;
    options.missing_token = missing;
    options.columns = cols;
    if (drop_cols != "none" && !drop_cols.empty()) {
      std::stringstream ss(drop_cols);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t col = 0;
        const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), col);
        if (ec != std::errc() || p != item.data() + item.size()) {
          throw ArgumentError("--drop-cols: bad column index '" + item + "'");
        }
        options.drop_columns.push_back(col);
      }
    }
    auto data = std::make_shared<const sources::DataMatrix>(
        sources::load_csv_matrix(csv_path, options));
    return sources::SourceSpec::dataset(std::move(data), sources::parse_row_order(row_mode), seed);
  }
};

// Beta grid given either explicitly or as an evenly spaced range.
struct BetaGrid {
  std::vector<double> grid;
  double min = 0.0;
  double max = 0.6;
  std::size_t steps = 25;

  void add_to(CLI::App* app, std::size_t default_steps) {
    steps = default_steps;
    app->add_option("--beta-grid", grid, "explicit comma-separated beta values")->delimiter(',');
    app->add_option("--beta-min", min, "first beta of the range")->capture_default_str();
    app->add_option("--beta-max", max, "last beta of the range")->capture_default_str();
    app->add_option("--beta-steps", steps, "number of range points")->capture_default_str();
  }

  std::vector<double> resolve() const {
    if (!grid.empty()) return grid;
    if (steps == 0) throw ArgumentError("--beta-steps must be positive");
    return experiments::linspace(min, max, steps);
  }

  void record(Manifest& m) const {
    if (!grid.empty()) {
      m.flag("beta-grid", join(grid));
    } else {
      m.flag("beta-min", min);
      m.flag("beta-max", max);
      m.flag("beta-steps", steps);
    }
  }
};

struct RunFlags {
  SourceFlags src;
  double beta = 0.0;
  std::size_t iters = 1000;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t record_every = 1;
};

struct SweepBetaFlags {
  SourceFlags src;
  BetaGrid betas;
  std::size_t trials = 100;
  std::size_t error_at = 100;
  std::size_t iters = 0;
  std::uint64_t seed = 0;
};

struct SweepEpsFlags {
  std::vector<double> eps_grid;
  double eps_min = 0.0;
  double eps_max = 0.95;
  std::size_t eps_steps = 21;
  BetaGrid betas;
  std::size_t n = 50;
  std::size_t iters = 4000;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
};

struct SweepNFlags {
  std::vector<std::size_t> n_set{50, 100, 500, 1000};
  BetaGrid betas;
  std::size_t iters = 4000;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
};

struct TheoryFlags {
  SourceFlags src;
  double beta = 0.0;
  bool beta_given = false;
  bool beta_max = false;
  bool closed_form = false;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

std::string render(const Manifest& manifest, const std::string& body) {
  std::ostringstream os;
  manifest.write(os);
  os << body;
  return os.str();
}

int cmd_run(const RunFlags& f, std::string& output) {
  if (f.trials == 0) throw ArgumentError("--trials must be positive");
  const sources::SourceSpec base = f.src.build(f.seed);
  Manifest m("run");
  f.src.record(m);
  m.flag("beta", f.beta);
  m.flag("iters", f.iters);
  m.flag("seed", std::to_string(f.seed));
  m.flag("trials", f.trials);
  m.flag("record-every", f.record_every);
  m.note("source: " + base.describe());
  m.note("x0: zero vector; error: ||x_t - x*||" +
         std::string(f.trials > 1 ? ", mean over trials with seeds seed..seed+trials-1" : ""));

  solver::RunOptions options;
  options.iterations = f.iters;
  options.record_every = f.record_every;
  std::vector<solver::Trajectory> runs;
  for (std::size_t i = 0; i < f.trials; ++i) {
    runs.push_back(solver::run(base.reseeded(f.seed + i), f.beta, options));
  }
  const auto curve = experiments::mean_error_curve(runs);
  std::ostringstream body;
  body << "t,error\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    body << runs.front().iterations[k] << ',' << format_value(curve[k]) << '\n';
  }
  if (runs.front().skipped > 0) body << "# skipped_degenerate=" << runs.front().skipped << '\n';
  output = render(m, body.str());
  return kExitOk;
}

int cmd_sweep_beta(const SweepBetaFlags& f, std::string& output) {
  experiments::ExperimentConfig cfg;
  cfg.source = f.src.build(f.seed);
  cfg.betas = f.betas.resolve();
  cfg.trials = f.trials;
  cfg.iterations = f.iters == 0 ? f.error_at : f.iters;
  cfg.base_seed = f.seed;
  cfg.record_every = 1;
  const auto result = experiments::sweep_beta(cfg, f.error_at);

  Manifest m("sweep-beta");
  f.src.record(m);
  f.betas.record(m);
  m.flag("trials", f.trials);
  m.flag("error-at", f.error_at);
  m.flag("iters", cfg.iterations);
  m.flag("seed", std::to_string(f.seed));
  m.note("statistic: ||x_t - x*|| at t=error-at over trials; trial i uses seed+i for every beta");

  std::ostringstream body;
  body << "beta,median,p25,p75,mean\n";
  for (std::size_t i = 0; i < result.axis.size(); ++i) {
    const auto& s = result.stats[i];
    body << format_value(result.axis[i]) << ',' << format_value(s.median) << ','
         << format_value(s.p25) << ',' << format_value(s.p75) << ',' << format_value(s.mean)
         << '\n';
  }
  body << "# argmin beta=" << format_value(result.argmin_value())
       << " median=" << format_value(result.stats[result.argmin].median) << '\n';
  output = render(m, body.str());
  return kExitOk;
}

int cmd_sweep_eps(const SweepEpsFlags& f, std::string& output) {
  std::vector<double> eps = f.eps_grid;
  if (eps.empty()) {
    if (f.eps_steps == 0) throw ArgumentError("--eps-steps must be positive");
    eps = experiments::linspace(f.eps_min, f.eps_max, f.eps_steps);
  }
  const auto betas = f.betas.resolve();
  const auto curves = experiments::sweep_epsilon(eps, betas, f.n, f.iters, f.trials, f.seed);

  Manifest m("sweep-eps");
  if (!f.eps_grid.empty()) {
    m.flag("eps-grid", join(f.eps_grid));
  } else {
    m.flag("eps-min", f.eps_min);
    m.flag("eps-max", f.eps_max);
    m.flag("eps-steps", f.eps_steps);
  }
  f.betas.record(m);
  m.flag("n", f.n);
  m.flag("iters", f.iters);
  m.flag("trials", f.trials);
  m.flag("seed", std::to_string(f.seed));
  m.note("source: uniform[eps,1]; statistic: log10 ||x_iters - x*|| over trials");

  std::ostringstream body;
  body << "eps,beta,mean_log10_error,median_log10_error\n";
  for (std::size_t e = 0; e < eps.size(); ++e) {
    for (const auto& c : curves) {
      body << format_value(c.axis[e]) << ',' << format_value(c.fixed_value) << ','
           << format_value(c.stats[e].mean) << ',' << format_value(c.stats[e].median) << '\n';
    }
  }
  output = render(m, body.str());
  return kExitOk;
}

int cmd_sweep_n(const SweepNFlags& f, std::string& output) {
  if (f.n_set.empty()) throw ArgumentError("--n-set must not be empty");
  const auto betas = f.betas.resolve();
  const auto curves = experiments::sweep_length(f.n_set, betas, f.iters, f.trials, f.seed);

  Manifest m("sweep-n");
  m.flag("n-set", join(f.n_set));
  f.betas.record(m);
  m.flag("iters", f.iters);
  m.flag("trials", f.trials);
  m.flag("seed", std::to_string(f.seed));
  m.note("source: uniform[0,1]; statistic: log10 ||x_iters - x*|| over trials");

  std::ostringstream body;
  body << "n,beta,mean_log10_error,median_log10_error\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.axis.size(); ++i) {
      body << static_cast<std::size_t>(c.fixed_value) << ',' << format_value(c.axis[i]) << ','
           << format_value(c.stats[i].mean) << ',' << format_value(c.stats[i].median) << '\n';
    }
  }
  for (const auto& c : curves) {
    body << "# argmin n=" << static_cast<std::size_t>(c.fixed_value)
         << " beta=" << format_value(c.argmin_value())
         << " mean_log10_error=" << format_value(c.stats[c.argmin].mean) << '\n';
  }
  output = render(m, body.str());
  return kExitOk;
}

int cmd_theory(const TheoryFlags& f, std::string& output) {
  if (!f.beta_given && !f.beta_max) throw ArgumentError("theory needs --beta and/or --beta-max");

  Manifest m("theory");
  theory::WEstimate w = [&] {
    if (f.closed_form) {
      if (f.src.source == "uniform" || f.src.source == "csv") {
        throw ArgumentError("--closed-form applies to sphere and gaussian sources only");
      }
      return theory::closed_form_W_isotropic(f.src.n);
    }
    return theory::estimate_W(f.src.build(f.seed), f.mc_samples);
  }();
  if (f.closed_form) {
    // Closed form is source-independent beyond n.
    m.flag("n", f.src.n);
    m.toggle("closed-form");
  } else {
    f.src.record(m);
    m.flag("mc-samples", f.mc_samples);
    m.flag("seed", std::to_string(f.seed));
  }
  if (f.beta_given) m.flag("beta", f.beta);
  if (f.beta_max) m.toggle("beta-max");

  const std::size_t n = w.matrix.order();
  const auto isotropic = theory::closed_form_W_isotropic(n);

  std::ostringstream body;
  body << "quantity,value\n";
  body << "n," << n << '\n';
  body << "w_exact," << (w.exact ? 1 : 0) << '\n';
  body << "w_samples," << w.sample_count << '\n';
  body << "w_trace," << format_value(w.matrix.trace()) << '\n';
  body << "w_frobenius_dev_from_identity_over_n,"
       << format_value(linalg::frobenius_distance(w.matrix, isotropic.matrix)) << '\n';
  body << "sigma_min," << format_value(w.sigma_min) << '\n';
  body << "sigma_max," << format_value(w.sigma_max) << '\n';

  int code = kExitOk;
  if (f.beta_max) {
    const double bmax = w.exact ? theory::max_beta_isotropic(n)
                                : theory::max_beta(std::max(w.sigma_min, 0.0), w.sigma_max);
    body << "beta_max," << format_value(bmax) << '\n';
  }
  if (f.beta_given) {
    const auto r = theory::rate_constants(f.beta, std::clamp(w.sigma_min, 0.0, 1.0),
                                          std::clamp(w.sigma_max, 0.0, 1.0));
    body << "beta," << format_value(r.beta) << '\n';
    body << "condition," << format_value(r.condition) << '\n';
    body << "admissible," << (r.admissible ? 1 : 0) << '\n';
    body << "a1," << format_value(r.a1) << '\n';
    body << "a2," << format_value(r.a2) << '\n';
    body << "q," << format_value(r.q) << '\n';
    body << "delta," << format_value(r.delta) << '\n';
    if (!r.admissible) code = kExitNotAdmissible;
  }
  output = render(m, body.str());
  return code;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file " + path);
  file << text;
  if (!file) throw IoError("write failure on " + path);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online heavy-ball Kaczmarz signal recovery", "ohbk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", OHBK_VERSION);
  std::string out_path;

  RunFlags run_f;
  auto* run_cmd = app.add_subcommand("run", "error trajectory of one (or a trial-averaged) run");
  run_f.src.add_to(run_cmd);
  run_cmd->add_option("--beta", run_f.beta, "momentum in [0,1)")->capture_default_str();
  run_cmd->add_option("--iters", run_f.iters, "measurements to consume")->capture_default_str();
  run_cmd->add_option("--seed", run_f.seed, "seed")->capture_default_str();
  run_cmd->add_option("--trials", run_f.trials, "average over this many seeds")
      ->capture_default_str();
  run_cmd->add_option("--record-every", run_f.record_every, "record stride")
      ->capture_default_str();
  run_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  SweepBetaFlags sb;
  auto* sb_cmd = app.add_subcommand("sweep-beta", "median/quartile error at a fixed t across beta");
  sb.src.add_to(sb_cmd);
  sb.betas.add_to(sb_cmd, 25);
  sb_cmd->add_option("--trials", sb.trials)->capture_default_str();
  sb_cmd->add_option("--error-at", sb.error_at, "iteration at which error is read")
      ->capture_default_str();
  sb_cmd->add_option("--iters", sb.iters, "iterations per run (default: error-at)");
  sb_cmd->add_option("--seed", sb.seed)->capture_default_str();
  sb_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  SweepEpsFlags se;
  auto* se_cmd = app.add_subcommand("sweep-eps", "final log-error on U[eps,1] sources");
  se_cmd->add_option("--eps-grid", se.eps_grid)->delimiter(',');
  se_cmd->add_option("--eps-min", se.eps_min)->capture_default_str();
  se_cmd->add_option("--eps-max", se.eps_max)->capture_default_str();
  se_cmd->add_option("--eps-steps", se.eps_steps)->capture_default_str();
  se.betas.add_to(se_cmd, 7);
  se_cmd->add_option("--n", se.n)->capture_default_str();
  se_cmd->add_option("--iters", se.iters)->capture_default_str();
  se_cmd->add_option("--trials", se.trials)->capture_default_str();
  se_cmd->add_option("--seed", se.seed)->capture_default_str();
  se_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  SweepNFlags sn;
  auto* sn_cmd = app.add_subcommand("sweep-n", "final log-error across beta for several lengths");
  sn_cmd->add_option("--n-set", sn.n_set)->delimiter(',')->capture_default_str();
  sn.betas.add_to(sn_cmd, 25);
  sn_cmd->add_option("--iters", sn.iters)->capture_default_str();
  sn_cmd->add_option("--trials", sn.trials)->capture_default_str();
  sn_cmd->add_option("--seed", sn.seed)->capture_default_str();
  sn_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  TheoryFlags th;
  auto* th_cmd = app.add_subcommand("theory", "W spectrum, admissibility and rate constants");
  th.src.source = "sphere";
  th.src.row_mode = "random";
  th.src.add_to(th_cmd);
  auto* beta_opt = th_cmd->add_option("--beta", th.beta, "momentum to check");
  th_cmd->add_flag("--beta-max", th.beta_max, "report the largest admissible beta");
  th_cmd->add_flag("--closed-form", th.closed_form, "use W = I/n instead of Monte Carlo");
  th_cmd->add_option("--mc-samples", th.mc_samples)->capture_default_str();
  th_cmd->add_option("--seed", th.seed)->capture_default_str();
  th_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  std::vector<const char*> argv{"ohbk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    std::string text;
    int code = kExitOk;
    if (run_cmd->parsed()) {
      code = cmd_run(run_f, text);
    } else if (sb_cmd->parsed()) {
      code = cmd_sweep_beta(sb, text);
    } else if (se_cmd->parsed()) {
      code = cmd_sweep_eps(se, text);
    } else if (sn_cmd->parsed()) {
      code = cmd_sweep_n(sn, text);
    } else if (th_cmd->parsed()) {
      th.beta_given = beta_opt->count() > 0;
      code = cmd_theory(th, text);
    }
    write_output(out_path, text, out);
    return code;
  } catch (const std::exception& e) {
    err << "ohbk: error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace ohbk::cli
