// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "levymc/bridge.hpp"
#include "levymc/estimator.hpp"
#include "levymc/exit_approx.hpp"
#include "levymc/validation.hpp"

using namespace levymc;

namespace {

constexpr double kExample1 = 0.38935;
constexpr double kExample2 = 0.0360;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EngineConfig example(double b, double gamma) {
  EngineConfig cfg;
  cfg.gamma = gamma;
  cfg.domain = {-kInfinity, b};
  return cfg;
}

void reproduce(int id, double b, double reference, double slack, std::uint64_t seed) {
  const McResult r = estimate_adaptive(example(b, 0.01), Payoff::indicator(), 100000, seed, 0);
  const double tol = 3.0 * r.std_error + r.bias_bound + slack;
  report(id, std::abs(r.estimate - reference) <= tol,
         fmt("b=%g estimate %.6f stderr %.2e bias %.2e |diff| %.2e tol %.2e breaches %llu (%.0f s)", b,
             r.estimate, r.std_error, r.bias_bound, std::abs(r.estimate - reference), tol,
             static_cast<unsigned long long>(r.depth_breaches), r.wall_seconds));
}

void bias_matrix() {
  int runs = 0, checked = 0, violations = 0;
  double worst = 0.0;
  for (double b : {1.0, 0.01}) {
    for (double gamma : {0.1, 0.01, 0.001}) {
      for (int k = 0; k < 20; ++k) {
        const McResult r = estimate_adaptive(example(b, gamma), Payoff::indicator(), 500,
                                             1000 + static_cast<std::uint64_t>(k), 0);
        ++runs;
        if (r.depth_breaches != 0) continue;
        ++checked;
        worst = std::max(worst, r.bias_bound / gamma);
        if (r.bias_bound > gamma) ++violations;
      }
    }
  }
  report(3, violations == 0 && checked > 0,
         fmt("%d runs, %d without breaches, max bias/gamma %.3f, violations %d", runs, checked, worst,
             violations));
}

void bridge_sampler() {
  const CauchyModel m(1.0);
  const std::uint64_t n = 100000;
  QuadratureConfig quad;
  quad.rel_tol = 1e-10;
  bool pass = true;
  std::string detail;

  RandomStream rng(77, 0);
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double y = m.sample_increment(1.0, rng);
    total += static_cast<double>(sample_bridge_midpoint(m, 1.0, y, rng).proposals);
  }
  const double mean = total / static_cast<double>(n);
  pass = pass && std::abs(mean - 4.0) <= 0.1;
  detail += fmt("unconditional mean %.4f", mean);

  const double cases[3][2] = {{1.0, 0.0}, {1.0, 5.0}, {0.01, -0.3}};
  for (int c = 0; c < 3; ++c) {
    const double t = cases[c][0], y = cases[c][1];
    RandomStream stream(78, static_cast<std::uint64_t>(c));
    std::vector<double> samples(n);
    double s = 0.0, s2 = 0.0;
    for (auto& x : samples) {
      const BridgeSampleStats d = sample_bridge_midpoint(m, t, y, stream);
      x = d.value;
      const double p = static_cast<double>(d.proposals);
      s += p;
      s2 += p * p;
    }
    const double avg = s / static_cast<double>(n);
    const double se = std::sqrt((s2 / static_cast<double>(n) - avg * avg) / static_cast<double>(n - 1));
    const double expected = 2.0 * m.marginal_density(t / 2.0, y / 2.0) / m.marginal_density(t, y);
    const double ks = bridge_ks_distance(m, t, y, samples, quad);
    const double ks_bound = 1.63 / std::sqrt(static_cast<double>(n));
    pass = pass && std::abs(avg - expected) <= 3.0 * se && ks < ks_bound;
    detail += fmt("; (t=%g,y=%g) mean %.4f vs %.4f se %.3f KS %.5f<%.5f", t, y, avg, expected, se, ks, ks_bound);
  }
  report(4, pass, detail);
}

void oracles() {
  const CauchyModel m(1.0);
  QuadratureConfig quad;
  quad.rel_tol = 1e-10;
  const double conv = convolution_oracle_error(m, quad);
  const double dens = density_oracle_error(m, quad);
  report(5, conv < 1e-8 && dens < 1e-6, fmt("convolution max rel err %.2e, density max rel err %.2e", conv, dens));
}

// Forward walk on a grid of 2^14 steps over [0, t]. At the first grid exit
// (step k, value z) the weight f_{t - kh}(y - z) / f_t(y) is the conditional
// likelihood of ending at y, so its mean estimates the bridge exit probability.
struct BruteForce {
  double estimate;
  double std_error;
};

double cauchy_density(double scale, double x) { return scale / (std::numbers::pi * (scale * scale + x * x)); }

BruteForce brute_force_exit(double b, double y, double t, std::uint64_t paths, std::uint64_t seed) {
  constexpr std::uint64_t steps = std::uint64_t{1} << 14;
  const double h = t / static_cast<double>(steps);
  const double scale = std::numbers::pi * h;
  const double norm = cauchy_density(std::numbers::pi * t, y);
  constexpr double inv32 = 0x1.0p-32;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t p = 0; p < paths; ++p) {
    RandomStream rng(seed, p);
    double x = 0.0;
    std::uint64_t k = 0;
    while (k < steps) {
      const std::uint64_t r = rng();
      const double u = 2.0 * ((static_cast<double>(r >> 32) + 0.5) * inv32) - 1.0;
      const double v = (static_cast<double>(r & 0xFFFFFFFFu) + 0.5) * inv32;
      if (u * u + v * v > 1.0) continue;
      x += scale * u / v;
      ++k;
      if (x >= b) break;
    }
    if (x < b || k == steps) continue;
    const double rest = std::numbers::pi * (t - static_cast<double>(k) * h);
    const double w = cauchy_density(rest, y - x) / norm;
    sum += w;
    sum2 += w * w;
  }
  const double n = static_cast<double>(paths);
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / (n - 1.0))};
}

void containment() {
  const CauchyModel m(1.0);
  const Domain d{-kInfinity, 1.0};
  bool pass = true;
  std::string detail;
  for (double t : {0.02, 0.01}) {
    const auto start = std::chrono::steady_clock::now();
    const BruteForce bf = brute_force_exit(1.0, 0.25, t, 1000000, 606);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const ExitEstimate ex = exit_estimate(m, d, 0.0, 0.25, t);
    const double gap = std::abs(bf.estimate - ex.p_tilde);
    pass = pass && gap <= ex.e_p + 3.0 * bf.std_error;
    detail += fmt("%st=%g p_hat %.4e se %.1e p_tilde %.4e e_p %.4e (%.0f s)", detail.empty() ? "" : "; ", t,
                  bf.estimate, bf.std_error, ex.p_tilde, ex.e_p, secs);
  }
  report(6, pass, detail);
}

void ordering() {
  SweepConfig adaptive;
  adaptive.engine = example(1.0, 0.01);
  adaptive.schedule = {0.7, 0.2, 0.07, 0.02, 0.007};
  adaptive.n_paths = 100000;
  adaptive.seed = 31;
  const SweepResult a = convergence_sweep(adaptive);

  SweepConfig uniform = adaptive;
  uniform.mode = SweepMode::Uniform;
  uniform.schedule = {32, 64, 128, 256, 512, 1024, 2048};
  uniform.reference = kExample1;
  uniform.seed = 32;
  const SweepResult u = convergence_sweep(uniform);

  report(7, a.slope < 0.0 && u.slope < 0.0 && a.slope <= u.slope - 1.0,
         fmt("adaptive slope %.3f, uniform slope %.3f", a.slope, u.slope));
}

std::string cli_rows(unsigned workers) {
  const std::string cmd = std::string("\"") + LEVYMC_CLI +
                          "\" estimate --upper 0.01 --paths 3000 --seed 5 --workers " + std::to_string(workers);
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {};
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = ::pclose(pipe);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {};
  // Drop the wall_seconds column.
  std::istringstream in(out);
  std::string result;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::istringstream row(line);
    for (std::string x; std::getline(row, x, ',');) f.push_back(x);
    if (f.size() == 9) f.erase(f.begin() + 7);
    for (const auto& x : f) result += x + ",";
    result += "\n";
  }
  return result;
}

void determinism() {
  const std::string one = cli_rows(1);
  const std::string three = cli_rows(3);
  const std::string eight = cli_rows(8);
  report(8, !one.empty() && one == three && one == eight,
         fmt("rows for 1, 3 and 8 workers %s", one == three && one == eight ? "identical" : "differ"));
}

void invariants() {
  bool pass = true;
  std::string detail;
  for (double b : {1.0, 0.01}) {
    const EngineConfig cfg = example(b, 0.01);
    const SkeletonGenerator gen(cfg);
    const int n = 10000;
    int bad = 0, breached = 0;
    std::string first;
    for (int k = 0; k < n; ++k) {
      RandomStream rng(909, static_cast<std::uint64_t>(k));
      const Skeleton s = gen.generate(rng);
      const std::string why = verify_skeleton(s, cfg);
      if (!why.empty()) {
        ++bad;
        if (first.empty()) first = why;
      }
      if (s.breached_intervals > 0) ++breached;
    }
    const double freq = static_cast<double>(breached) / n;
    pass = pass && bad == 0 && freq < 1e-3;
    detail += fmt("%sb=%g failures %d breach frequency %.1e", detail.empty() ? "" : "; ", b, bad, freq);
    if (!first.empty()) detail += " (" + first + ")";
  }
  report(9, pass, detail);
}

}  // namespace

int main() {
  reproduce(1, 1.0, kExample1, 1e-4, 7);
  reproduce(2, 0.01, kExample2, 6e-5, 7);
  bias_matrix();
  bridge_sampler();
  oracles();
  containment();
  ordering();
  determinism();
  invariants();
  return failures == 0 ? 0 : 1;
}
