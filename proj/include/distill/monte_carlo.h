#ifndef DISTILL_MONTE_CARLO_H_
#define DISTILL_MONTE_CARLO_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "distill/noise_model.h"

namespace distill {

/// SplitMix64: a 64-bit counter-based generator. Each trial gets its own stream
/// whose state is derived from (master seed, trial index), so results do not
/// depend on how trials are scheduled across threads.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

struct TrajectoryRecord {
  std::vector<int> outcomes;  // M per round, +1 or -1
  long halted_at = 0;
  int final_delta = 0;  // +/- delta_h
};

struct SimulationOptions {
  long max_rounds = 1'000'000;
};

TrajectoryRecord simulate_trajectory(const WalkSpec& spec, std::uint64_t seed,
                                     const SimulationOptions& options = {});

struct CurveOptions {
  long max_rounds = 1'000'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Empirical halting statistics. Vectors are indexed by round count T.
struct EmpiricalCurve {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> halt_counts;
  std::vector<double> cumulative;      // fraction halted within T rounds
  std::vector<double> standard_error;  // sqrt(p (1 - p) / trials) of `cumulative`
  double mean_rounds = 0.0;
  double mean_rounds_standard_error = 0.0;

  long last_round() const { return static_cast<long>(halt_counts.size()) - 1; }
  double cumulative_at(long t) const;
};

EmpiricalCurve estimate_success_curve(const WalkSpec& spec, std::uint64_t trials,
                                      std::uint64_t seed, const CurveOptions& options = {});

}  // namespace distill

#endif  // DISTILL_MONTE_CARLO_H_
