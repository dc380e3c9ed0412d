#include "distill/monte_carlo.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "distill/errors.h"

namespace distill {
namespace {

struct WalkResult {
  long rounds;
  int final_delta;
};

// Signed walk. For PS, `run_sign` is the first outcome of the current run and
// any disagreeing outcome sends delta back to 0.
WalkResult run_walk(const WalkSpec& spec, const std::vector<double>& step_up, SplitMix64& rng,
                    long max_rounds, std::vector<int>* outcomes) {
  const int h = spec.delta_h();
  const bool post_select = spec.protocol() == Protocol::kPs;
  int delta = 0;
  long rounds = 0;
  while (std::abs(delta) < h) {
    if (++rounds > max_rounds) {
      throw NonConvergenceError("trajectory exceeded " + std::to_string(max_rounds) + " rounds");
    }
    const double u = rng.uniform();
    int m;
    if (delta == 0) {
      m = u < 0.5 ? +1 : -1;
    } else {
      const int sign = delta > 0 ? +1 : -1;
      m = u < step_up[std::abs(delta)] ? sign : -sign;
    }
    if (outcomes != nullptr) outcomes->push_back(m);
    if (post_select && delta != 0 && (m > 0) != (delta > 0)) {
      delta = 0;
    } else {
      delta += m;
    }
  }
  return {rounds, delta};
}

std::vector<double> step_up_table(const WalkSpec& spec) {
  std::vector<double> table(spec.delta_h() + 1);
  for (int d = 0; d <= spec.delta_h(); ++d) {
    table[d] = step_up_probability(spec.channel(), d);
  }
  return table;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  SplitMix64 mix(master_seed ^ SplitMix64(trial_index)());
  return mix();
}

TrajectoryRecord simulate_trajectory(const WalkSpec& spec, std::uint64_t seed,
                                     const SimulationOptions& options) {
  SplitMix64 rng(seed);
  TrajectoryRecord record;
  const WalkResult r = run_walk(spec, step_up_table(spec), rng, options.max_rounds, &record.outcomes);
  record.halted_at = r.rounds;
  record.final_delta = r.final_delta;
  return record;
}

double EmpiricalCurve::cumulative_at(long t) const {
  if (t < 0 || cumulative.empty()) return 0.0;
  if (t > last_round()) return cumulative.back();
  return cumulative[static_cast<std::size_t>(t)];
}

EmpiricalCurve estimate_success_curve(const WalkSpec& spec, std::uint64_t trials,
                                      std::uint64_t seed, const CurveOptions& options) {
  if (trials < 1) throw DomainError("at least one trial is required");
  const std::vector<double> step_up = step_up_table(spec);

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(threads, trials)));

  // Each worker tallies integer counts; merging by addition is order-free.
  std::vector<std::vector<std::uint64_t>> tallies(threads);
  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](unsigned w) {
    try {
      auto& counts = tallies[w];
      for (std::uint64_t i = w; i < trials; i += threads) {
        SplitMix64 rng(trial_seed(seed, i));
        const long t = run_walk(spec, step_up, rng, options.max_rounds, nullptr).rounds;
        if (counts.size() <= static_cast<std::size_t>(t)) counts.resize(t + 1, 0);
        ++counts[t];
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  EmpiricalCurve curve;
  curve.trials = trials;
  for (const auto& counts : tallies) {
    if (curve.halt_counts.size() < counts.size()) curve.halt_counts.resize(counts.size(), 0);
    for (std::size_t t = 0; t < counts.size(); ++t) curve.halt_counts[t] += counts[t];
  }

  const double n = static_cast<double>(trials);
  std::uint64_t running = 0;
  double sum_t = 0.0;
  double sum_t2 = 0.0;
  for (std::size_t t = 0; t < curve.halt_counts.size(); ++t) {
    running += curve.halt_counts[t];
    const double p = static_cast<double>(running) / n;
    curve.cumulative.push_back(p);
    curve.standard_error.push_back(std::sqrt(p * (1.0 - p) / n));
    const double c = static_cast<double>(curve.halt_counts[t]);
    sum_t += c * static_cast<double>(t);
    sum_t2 += c * static_cast<double>(t) * static_cast<double>(t);
  }
  curve.mean_rounds = sum_t / n;
  const double variance = std::max(0.0, sum_t2 / n - curve.mean_rounds * curve.mean_rounds);
  curve.mean_rounds_standard_error = std::sqrt(variance / n);
  return curve;
}

}  // namespace distill
