// levymc: command-line front end for the killed Lévy Monte Carlo library.
//
// Exit codes: 0 success, 1 failed validation check, 2 configuration error,
// 3 numerical failure.

#include <CLI11.hpp>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "levymc/error.hpp"
#include "levymc/estimator.hpp"
#include "levymc/report.hpp"
#include "levymc/validation.hpp"

namespace {

using namespace levymc;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunOptions {
  std::string model = "cauchy";
  double c = 1.0;
  std::string lower = "-inf";
  std::string upper = "+inf";
  unsigned max_depth = kMaxDepth;
  std::uint64_t paths = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string payoff = "indicator";
  std::string output;
  std::string format = "csv";
};

double parse_barrier(const std::string& text, const char* name) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || errno == ERANGE || std::isnan(v)) {
    throw DomainError(std::string(name) + ": cannot parse '" + text + "'");
  }
  return v;
}

void add_common(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--model", o.model, "Driving process")->check(CLI::IsMember({"cauchy"}));
  cmd->add_option("--c", o.c, "Intensity c of the Levy density c/x^2");
  cmd->add_option("--lower", o.lower, "Lower barrier a (-inf allowed)");
  cmd->add_option("--upper", o.upper, "Upper barrier b (+inf allowed)");
  cmd->add_option("--max-depth", o.max_depth, "Finest dyadic level of the skeleton");
  cmd->add_option("--paths", o.paths, "Number of Monte Carlo paths");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--workers", o.workers, "Worker threads (default: logical cores)");
  cmd->add_option("--payoff", o.payoff,
                  "indicator | constant:V | poly:cap=C:a0,a1,.. | put:K=V | call:K=V,cap=C");
  cmd->add_option("--output", o.output, "Result file (CSV appended, JSON replaced)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

EngineConfig engine_from(const RunOptions& o, double gamma) {
  EngineConfig cfg;
  cfg.gamma = gamma;
  cfg.max_depth = o.max_depth;
  cfg.model = {ModelKind::Cauchy, o.c};
  cfg.domain = {parse_barrier(o.lower, "--lower"), parse_barrier(o.upper, "--upper")};
  validate(cfg);
  if (o.paths < 2) throw DomainError("--paths must be at least 2");
  if (!o.output.empty()) check_output_target(o.output, o.format == "csv");
  return cfg;
}

void emit(const RunOptions& o, const std::vector<std::string>& csv_rows, const std::string& json) {
  if (o.format == "json") {
    if (o.output.empty()) {
      std::cout << json << '\n';
    } else {
      write_atomic(o.output, json + "\n");
    }
    return;
  }
  if (o.output.empty()) {
    std::cout << csv_document(csv_rows);
  } else {
    append_csv(o.output, csv_rows);
  }
}

void emit_checked(const RunOptions& o, const std::vector<std::string>& csv_rows,
                  const std::string& json) {
  try {
    emit(o, csv_rows, json);
  } catch (const std::runtime_error& e) {
    throw DomainError(std::string("cannot write output: ") + e.what());
  }
}

std::vector<double> parse_schedule(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const std::string& item : items) {
    std::istringstream in(item);
    std::string piece;
    while (std::getline(in, piece, ',')) {
      if (piece.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(piece.c_str(), &end);
      if (*end != '\0' || !std::isfinite(v)) throw DomainError("--schedule: bad entry '" + piece + "'");
      out.push_back(v);
    }
  }
  if (out.empty()) throw DomainError("--schedule must not be empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive bridge Monte Carlo for killed Levy processes"};
  app.require_subcommand(1);

  RunOptions est_opts, base_opts, sweep_opts;
  double gamma = 0.01;
  std::uint64_t grid = 0;
  std::string sweep_mode = "adaptive";
  std::vector<std::string> schedule;
  double sweep_gamma = 0.01;
  std::optional<double> reference;

  auto* estimate = app.add_subcommand("estimate", "Adaptive estimate of E[F(X_1); tau > 1]");
  add_common(estimate, est_opts);
  estimate->add_option("--gamma", gamma, "Bias tolerance per unit time");

  auto* baseline = app.add_subcommand("baseline", "Uniform-grid discretisation baseline");
  add_common(baseline, base_opts);
  baseline->add_option("--grid", grid, "Number of grid steps on [0, 1]")->required();

  auto* sweep = app.add_subcommand("sweep", "Error against wall time over a schedule");
  add_common(sweep, sweep_opts);
  sweep->add_option("--mode", sweep_mode, "adaptive (schedule of gammas) or uniform (grid sizes)")
      ->check(CLI::IsMember({"adaptive", "uniform"}));
  sweep->add_option("--schedule", schedule, "Comma-separated gammas or grid sizes")->required();
  sweep->add_option("--gamma", sweep_gamma,
                    "Uniform mode: reference run uses gamma/10 with 10x the paths");
  sweep->add_option("--reference", reference, "Uniform mode: known reference value");

  ValidationOptions vopts;
  auto* validate_cmd = app.add_subcommand("validate", "Run the oracle validation suites");
  validate_cmd->add_option("--only", vopts.only, "Suites to run")
      ->check(CLI::IsMember(validation_suites()));
  validate_cmd->add_option("--samples", vopts.bridge_samples, "Bridge samples per configuration");
  validate_cmd->add_option("--seed", vopts.seed, "Random seed");
  validate_cmd->add_option("--c", vopts.c, "Intensity c");
  validate_cmd->add_option("--inject-fault", vopts.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*estimate) {
      const EngineConfig cfg = engine_from(est_opts, gamma);
      const Payoff payoff = Payoff::parse(est_opts.payoff);
      const unsigned workers = resolve_workers(est_opts.workers);
      const McResult r = estimate_adaptive(cfg, payoff, est_opts.paths, est_opts.seed, workers);
      emit_checked(est_opts, {csv_row(r)}, json_result(r));
    } else if (*baseline) {
      const EngineConfig cfg = engine_from(base_opts, 0.01);
      if (grid < 1) throw DomainError("--grid must be at least 1");
      const Payoff payoff = Payoff::parse(base_opts.payoff);
      const unsigned workers = resolve_workers(base_opts.workers);
      const McResult r = estimate_uniform(cfg, payoff, grid, base_opts.paths, base_opts.seed, workers);
      emit_checked(base_opts, {csv_row(r)}, json_result(r));
    } else if (*sweep) {
      SweepConfig cfg;
      cfg.mode = sweep_mode == "uniform" ? SweepMode::Uniform : SweepMode::Adaptive;
      cfg.engine = engine_from(sweep_opts, sweep_gamma);
      cfg.payoff = Payoff::parse(sweep_opts.payoff);
      cfg.schedule = parse_schedule(schedule);
      cfg.n_paths = sweep_opts.paths;
      cfg.seed = sweep_opts.seed;
      cfg.workers = resolve_workers(sweep_opts.workers);
      cfg.reference = reference;
      for (double v : cfg.schedule) {
        if (cfg.mode == SweepMode::Adaptive && !(v > 0.0)) throw DomainError("--schedule: gammas must be positive");
        if (cfg.mode == SweepMode::Uniform && (!(v >= 1.0) || v != std::floor(v))) {
          throw DomainError("--schedule: grid sizes must be positive integers");
        }
      }
      const SweepResult result = convergence_sweep(cfg);
      std::vector<std::string> rows;
      for (const McResult& r : result.rows) rows.push_back(csv_row(r));
      rows.push_back(csv_slope_row(result.slope));
      emit_checked(sweep_opts, rows, json_sweep(result));
    } else if (*validate_cmd) {
      const std::vector<CheckResult> checks = run_validation(vopts);
      bool all = true;
      for (const CheckResult& c : checks) {
        std::cout << (c.passed ? "PASS" : "FAIL") << ' ' << c.suite << ": " << c.name
                  << " (value " << c.value << ", bound " << c.threshold << ")\n";
        all = all && c.passed;
      }
      return all ? kExitOk : kExitCheckFailed;
    }
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure in " << e.component() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
