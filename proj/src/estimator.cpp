#include "levymc/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "levymc/error.hpp"

namespace levymc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("payoff: cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw DomainError("payoff: cannot parse " + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

// key=value list; unknown keys are rejected.
std::map<std::string, double> parse_keys(const std::string& text,
                                         const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("payoff: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw DomainError("payoff: unknown parameter '" + key + "'");
    }
    out[key] = parse_number(item.substr(eq + 1), key);
  }
  return out;
}

void check_paths(std::uint64_t n_paths) {
  if (n_paths < 2) throw DomainError("estimator: at least two paths are required");
}

// Runs body(k) for k in [0, n) over `workers` threads in blocks. Per-path
// outputs are written by index, so the layout never affects results.
template <class Body>
void parallel_paths(std::uint64_t n, unsigned workers, Body&& body) {
  constexpr std::uint64_t kBlock = 64;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};
  auto work = [&](unsigned worker) {
    try {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        const std::uint64_t begin = next.fetch_add(kBlock);
        if (begin >= n) return;
        const std::uint64_t end = std::min(n, begin + kBlock);
        for (std::uint64_t k = begin; k < end; ++k) body(worker, k);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct PathSummary {
  double mean = 0.0;
  double std_error = 0.0;
};

PathSummary summarise(const std::vector<double>& values) {
  const std::size_t n = values.size();
  PathSummary out;
  out.mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - out.mean) * (values[i] - out.mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

}  // namespace

Payoff Payoff::indicator() { return {}; }

Payoff Payoff::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("payoff: constant must be finite");
  Payoff p;
  p.kind_ = PayoffKind::Constant;
  p.coeffs_ = {value};
  return p;
}

Payoff Payoff::polynomial(std::vector<double> coeffs, double cap) {
  if (coeffs.empty()) throw DomainError("payoff: polynomial needs at least one coefficient");
  if (!(cap > 0.0) || !std::isfinite(cap)) throw DomainError("payoff: polynomial cap must be positive");
  for (double a : coeffs) {
    if (!std::isfinite(a)) throw DomainError("payoff: polynomial coefficients must be finite");
  }
  Payoff p;
  p.kind_ = PayoffKind::Polynomial;
  p.coeffs_ = std::move(coeffs);
  p.cap_ = cap;
  return p;
}

Payoff Payoff::put(double strike) {
  if (!(strike > 0.0) || !std::isfinite(strike)) throw DomainError("payoff: put strike must be positive");
  Payoff p;
  p.kind_ = PayoffKind::Put;
  p.strike_ = strike;
  return p;
}

Payoff Payoff::call(double strike, double cap) {
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw DomainError("payoff: call strike must be >= 0");
  if (!(cap > 0.0) || !std::isfinite(cap)) throw DomainError("payoff: call cap must be positive");
  Payoff p;
  p.kind_ = PayoffKind::Call;
  p.strike_ = strike;
  p.cap_ = cap;
  return p;
}

Payoff Payoff::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
  if (head == "indicator" && colon == std::string::npos) return indicator();
  if (head == "constant" && colon != std::string::npos) return constant(parse_number(rest, "constant"));
  if (head == "poly" && colon != std::string::npos) {
    const auto second = rest.find(':');
    if (second == std::string::npos) throw DomainError("payoff: expected poly:cap=C:a0,a1,...");
    const auto keys = parse_keys(rest.substr(0, second), {"cap"});
    if (!keys.count("cap")) throw DomainError("payoff: poly needs cap=");
    std::vector<double> coeffs;
    for (const std::string& item : split(rest.substr(second + 1), ',')) {
      coeffs.push_back(parse_number(item, "coefficient"));
    }
    return polynomial(std::move(coeffs), keys.at("cap"));
  }
  if (head == "put" && colon != std::string::npos) {
    const auto keys = parse_keys(rest, {"K"});
    if (!keys.count("K")) throw DomainError("payoff: put needs K=");
    return put(keys.at("K"));
  }
  if (head == "call" && colon != std::string::npos) {
    const auto keys = parse_keys(rest, {"K", "cap"});
    if (!keys.count("K") || !keys.count("cap")) throw DomainError("payoff: call needs K= and cap=");
    return call(keys.at("K"), keys.at("cap"));
  }
  throw DomainError("payoff: unrecognised specification '" + text + "'");
}

double Payoff::operator()(double x) const {
  switch (kind_) {
    case PayoffKind::Indicator:
      return 1.0;
    case PayoffKind::Constant:
      return coeffs_[0];
    case PayoffKind::Polynomial: {
      const double z = std::clamp(x, -cap_, cap_);
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
      return acc;
    }
    case PayoffKind::Put:
      return std::max(strike_ - std::exp(x), 0.0);
    case PayoffKind::Call:
      return std::min(std::max(std::exp(x) - strike_, 0.0), cap_);
  }
  return 0.0;
}

double Payoff::sup_abs() const {
  switch (kind_) {
    case PayoffKind::Indicator:
      return 1.0;
    case PayoffKind::Constant:
      return std::abs(coeffs_[0]);
    case PayoffKind::Polynomial: {
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * cap_ + std::abs(*it);
      return acc;
    }
    case PayoffKind::Put:
      return strike_;
    case PayoffKind::Call:
      return cap_;
  }
  return 0.0;
}

std::string Payoff::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case PayoffKind::Indicator:
      os << "indicator";
      break;
    case PayoffKind::Constant:
      os << "constant:" << coeffs_[0];
      break;
    case PayoffKind::Polynomial:
      os << "poly:cap=" << cap_ << ':';
      for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
      break;
    case PayoffKind::Put:
      os << "put:K=" << strike_;
      break;
    case PayoffKind::Call:
      os << "call:K=" << strike_ << ",cap=" << cap_;
      break;
  }
  return os.str();
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

unsigned resolve_workers(unsigned requested) {
  if (const char* env = std::getenv("LEVY_MC_THREADS"); env && *env) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 4096) {
      throw DomainError("LEVY_MC_THREADS must be a positive integer");
    }
    return static_cast<unsigned>(value);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

McResult estimate_adaptive(const EngineConfig& cfg, const Payoff& payoff, std::uint64_t n_paths,
                           std::uint64_t seed, unsigned workers) {
  check_paths(n_paths);
  const auto start = Clock::now();
  const SkeletonGenerator generator(cfg);
  workers = resolve_workers(workers);

  std::vector<double> values(n_paths), bias(n_paths), points(n_paths);
  std::vector<unsigned char> breached(n_paths);
  std::vector<double> gen_time(workers, 0.0), weight_time(workers, 0.0);

  parallel_paths(n_paths, workers, [&](unsigned worker, std::uint64_t k) {
    RandomStream rng(seed, k);
    const auto t0 = Clock::now();
    const Skeleton skel = generator.generate(rng);
    const auto t1 = Clock::now();
    // Accepted interval estimates are cached on the skeleton.
    double weight = 0.0;
    double path_bias = 0.0;
    if (!skel.exited) {
      weight = 1.0;
      for (const ExitEstimate& e : skel.intervals) {
        weight *= 1.0 - e.p_tilde;
        path_bias += e.e_p;
      }
    }
    const double f = payoff(skel.terminal());
    values[k] = f * weight;
    bias[k] = std::abs(f) * path_bias;
    points[k] = static_cast<double>(skel.size());
    breached[k] = skel.breached_intervals > 0;
    gen_time[worker] += std::chrono::duration<double>(t1 - t0).count();
    weight_time[worker] += seconds_since(t1);
  });

  McResult out;
  out.gamma_or_n = cfg.gamma;
  const PathSummary summary = summarise(values);
  out.estimate = summary.mean;
  out.std_error = summary.std_error;
  out.bias_bound = pairwise_sum(bias.data(), n_paths) / static_cast<double>(n_paths);
  out.paths = n_paths;
  out.mean_skeleton_points = pairwise_sum(points.data(), n_paths) / static_cast<double>(n_paths);
  out.depth_breaches = static_cast<std::uint64_t>(std::count(breached.begin(), breached.end(), 1));
  out.seed = seed;
  for (unsigned w = 0; w < workers; ++w) {
    out.generation_seconds += gen_time[w];
    out.weight_seconds += weight_time[w];
  }
  out.wall_seconds = seconds_since(start);
  return out;
}

McResult estimate_uniform(const EngineConfig& cfg, const Payoff& payoff, std::uint64_t n_grid,
                          std::uint64_t n_paths, std::uint64_t seed, unsigned workers) {
  auto rows = estimate_uniform_coupled(cfg, payoff, {n_grid}, n_paths, seed, workers);
  return rows.front();
}

std::vector<McResult> estimate_uniform_coupled(const EngineConfig& cfg, const Payoff& payoff,
                                               const std::vector<std::uint64_t>& grids,
                                               std::uint64_t n_paths, std::uint64_t seed,
                                               unsigned workers) {
  check_paths(n_paths);
  validate(cfg.domain);
  if (grids.empty()) throw DomainError("estimate_uniform: no grid given");
  const std::uint64_t finest = *std::max_element(grids.begin(), grids.end());
  for (std::uint64_t n : grids) {
    if (n < 1) throw DomainError("estimate_uniform: n_grid must be >= 1");
    if (finest % n != 0) throw DomainError("estimate_uniform: grids must divide the finest grid");
  }
  if (finest > (std::uint64_t{1} << 32)) throw DomainError("estimate_uniform: n_grid too large");
  const auto start = Clock::now();
  const auto model = make_model(cfg.model);
  workers = resolve_workers(workers);
  const double h = 1.0 / static_cast<double>(finest);
  const std::size_t m = grids.size();

  std::vector<std::uint64_t> strides(m);
  for (std::size_t g = 0; g < m; ++g) strides[g] = finest / grids[g];

  // values[g * n_paths + k]
  std::vector<double> values(m * n_paths);
  parallel_paths(n_paths, workers, [&](unsigned, std::uint64_t k) {
    RandomStream rng(seed, k);
    std::vector<char> killed(m, 0);
    std::size_t alive = m;
    double x = 0.0;
    for (std::uint64_t step = 1; step <= finest && alive > 0; ++step) {
      x += model->sample_increment(h, rng);
      if (cfg.domain.contains(x)) continue;
      for (std::size_t g = 0; g < m; ++g) {
        if (!killed[g] && step % strides[g] == 0) {
          killed[g] = 1;
          --alive;
        }
      }
    }
    const double f = alive > 0 ? payoff(x) : 0.0;
    for (std::size_t g = 0; g < m; ++g) values[g * n_paths + k] = killed[g] ? 0.0 : f;
  });

  const double wall = seconds_since(start);
  std::vector<McResult> rows(m);
  for (std::size_t g = 0; g < m; ++g) {
    const std::vector<double> slice(values.begin() + static_cast<std::ptrdiff_t>(g * n_paths),
                                    values.begin() + static_cast<std::ptrdiff_t>((g + 1) * n_paths));
    const PathSummary summary = summarise(slice);
    McResult& r = rows[g];
    r.gamma_or_n = static_cast<double>(grids[g]);
    r.estimate = summary.mean;
    r.std_error = summary.std_error;
    r.bias_bound = std::numeric_limits<double>::quiet_NaN();
    r.paths = n_paths;
    r.mean_skeleton_points = static_cast<double>(grids[g] + 1);
    r.seed = seed;
    r.generation_seconds = wall;
    r.wall_seconds = wall;
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || !(std::abs(denom) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

double sweep_reference(const EngineConfig& cfg, const Payoff& payoff, std::uint64_t n_paths,
                       std::uint64_t seed, unsigned workers) {
  using Key = std::tuple<double, unsigned, double, double, double, std::string, std::uint64_t,
                         std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const Key key{cfg.gamma, cfg.max_depth, cfg.domain.a, cfg.domain.b, cfg.model.c,
                payoff.describe(), n_paths, seed};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double value = estimate_adaptive(cfg, payoff, n_paths, seed, workers).estimate;
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, value);
  return value;
}

SweepResult convergence_sweep(const SweepConfig& cfg) {
  if (cfg.schedule.empty()) throw DomainError("sweep: schedule is empty");
  check_paths(cfg.n_paths);
  SweepResult out;
  out.reference = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> times, errors;
  if (cfg.mode == SweepMode::Adaptive) {
    for (double gamma : cfg.schedule) {
      EngineConfig engine = cfg.engine;
      engine.gamma = gamma;
      validate(engine);
      out.rows.push_back(estimate_adaptive(engine, cfg.payoff, cfg.n_paths, cfg.seed, cfg.workers));
      times.push_back(out.rows.back().wall_seconds);
      errors.push_back(out.rows.back().bias_bound);
    }
  } else {
    for (double n : cfg.schedule) {
      if (!(n >= 1.0) || n != std::floor(n) || n > 4294967296.0) {
        throw DomainError("sweep: grid sizes must be positive integers");
      }
    }
    if (cfg.reference) {
      out.reference = *cfg.reference;
    } else {
      EngineConfig engine = cfg.engine;
      engine.gamma /= 10.0;
      validate(engine);
      out.reference = sweep_reference(engine, cfg.payoff, 10 * cfg.n_paths, cfg.seed, cfg.workers);
    }
    for (double n : cfg.schedule) {
      out.rows.push_back(estimate_uniform(cfg.engine, cfg.payoff, static_cast<std::uint64_t>(n),
                                          cfg.n_paths, cfg.seed, cfg.workers));
      times.push_back(out.rows.back().wall_seconds);
      errors.push_back(std::abs(out.rows.back().estimate - out.reference));
    }
  }
  out.slope = loglog_slope(times, errors);
  return out;
}

}  // namespace levymc
