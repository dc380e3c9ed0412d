#include "distill/walk_engine.h"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "distill/errors.h"

namespace distill {
namespace {

// Counts first-passage paths with a DP over signed positions -(d-1)..(d-1).
// Returns nullopt when Int overflows (only possible for the native type).
template <typename Int>
std::optional<Int> first_passage_dp(int d, long t) {
  const int width = 2 * d - 1;
  std::vector<Int> ways(width, Int(0));
  std::vector<Int> next(width, Int(0));
  ways[d - 1] = 1;  // position 0
  Int absorbed = 0;
  for (long step = 1; step <= t; ++step) {
    std::fill(next.begin(), next.end(), Int(0));
    absorbed = 0;
    for (int i = 0; i < width; ++i) {
      if (ways[i] == 0) continue;
      for (int dir : {-1, +1}) {
        const int j = i + dir;
        Int& slot = (j < 0 || j >= width) ? absorbed : next[j];
        if constexpr (std::is_same_v<Int, std::uint64_t>) {
          if (__builtin_add_overflow(slot, ways[i], &slot)) return std::nullopt;
        } else {
          slot += ways[i];
        }
      }
    }
    ways.swap(next);
  }
  return absorbed;
}

}  // namespace

std::vector<Transition> transitions_from(const WalkSpec& spec, int d) {
  const int h = spec.delta_h();
  if (d < 0 || d >= h) {
    throw DomainError("transient depth must lie in [0, delta_h), got " + std::to_string(d));
  }
  auto state = [h](int depth) { return ChainState{depth, depth == h}; };
  if (d == 0) {
    // Folded view: either sign of the first outcome raises |delta| to 1.
    return {{state(1), 1.0}};
  }
  const double up = step_up_probability(spec.channel(), d);
  const int down_to = spec.protocol() == Protocol::kNps ? d - 1 : 0;
  return {{state(d + 1), up}, {state(down_to), 1.0 - up}};
}

double HaltingDistribution::mass_at(long t) const {
  if (t < 0 || t > last_round()) return 0.0;
  return mass[static_cast<std::size_t>(t)];
}

double HaltingDistribution::cumulative_at(long t) const {
  if (t < 0) return 0.0;
  if (t > last_round()) return cumulative.back();
  return cumulative[static_cast<std::size_t>(t)];
}

HaltingDistribution halting_distribution(const WalkSpec& spec, const HaltingOptions& options) {
  if (!(options.tail_threshold > 0.0 && options.tail_threshold < 1.0)) {
    throw DomainError("tail threshold must lie in (0, 1)");
  }
  const int h = spec.delta_h();

  // Transition table per transient depth, built once.
  std::vector<std::vector<Transition>> table;
  table.reserve(h);
  for (int d = 0; d < h; ++d) table.push_back(transitions_from(spec, d));

  HaltingDistribution out{spec, {0.0}, {0.0}, 0.0, 1.0};
  std::vector<double> occupancy(h, 0.0);
  std::vector<double> next(h, 0.0);
  occupancy[0] = 1.0;
  // Survival S(t) = P(T > t), kept for the tail estimate of <T>.
  std::vector<double> survival{1.0};

  double running = 0.0;
  double weighted = 0.0;
  long t = 0;
  while (out.tail_bound > options.tail_threshold) {
    if (++t > options.max_rounds) {
      throw NonConvergenceError("halting distribution did not converge within " +
                                std::to_string(options.max_rounds) + " rounds");
    }
    std::fill(next.begin(), next.end(), 0.0);
    double absorbed = 0.0;
    for (int d = 0; d < h; ++d) {
      if (occupancy[d] == 0.0) continue;
      for (const Transition& tr : table[d]) {
        if (tr.to.absorbed) {
          absorbed += occupancy[d] * tr.probability;
        } else {
          next[tr.to.d] += occupancy[d] * tr.probability;
        }
      }
    }
    occupancy.swap(next);
    double remaining = 0.0;
    for (double p : occupancy) remaining += p;

    running += absorbed;
    weighted += static_cast<double>(t) * absorbed;
    out.mass.push_back(absorbed);
    out.cumulative.push_back(running);
    out.tail_bound = remaining;
    survival.push_back(remaining);
  }

  // E[T] = sum_{t>=0} S(t) = sum_{T<=L} T m(T) + L S(L) + sum_{t>=L} S(t).
  // The last sum is extrapolated geometrically from S(L) / S(L-2); the two-round
  // ratio sidesteps the period-2 structure of the NPS walk.
  const double s_last = survival[t];
  double tail_sum = 0.0;
  if (t >= 2 && s_last > 0.0 && survival[t - 2] > 0.0) {
    const double ratio = std::sqrt(std::min(1.0 - 1e-15, s_last / survival[t - 2]));
    tail_sum = s_last / (1.0 - ratio);
  }
  out.mean_rounds = weighted + static_cast<double>(t) * s_last + tail_sum;
  return out;
}

double success_probability_by(const WalkSpec& spec, long t, const HaltingOptions& options) {
  if (t < 0) throw DomainError("round count must be nonnegative");
  return halting_distribution(spec, options).cumulative_at(t);
}

namespace {

double expected_rounds_linear_solve(const WalkSpec& spec) {
  const int h = spec.delta_h();
  // (I - Q) E = 1 over transient depths 0..h-1.
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(h, h);
  for (int d = 0; d < h; ++d) {
    for (const Transition& tr : transitions_from(spec, d)) {
      if (!tr.to.absorbed) system(d, tr.to.d) -= tr.probability;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    throw NumericalError("first-step system for expected rounds is singular");
  }
  const Eigen::VectorXd rounds = lu.solve(Eigen::VectorXd::Ones(h));
  return rounds(0);
}

}  // namespace

RoundsEstimate expected_rounds_both(const WalkSpec& spec, const HaltingOptions& options) {
  return {halting_distribution(spec, options).mean_rounds, expected_rounds_linear_solve(spec)};
}

double expected_rounds(const WalkSpec& spec, const HaltingOptions& options) {
  const RoundsEstimate both = expected_rounds_both(spec, options);
  const double scale = std::max(1.0, std::abs(both.by_linear_solve));
  if (std::abs(both.by_summation - both.by_linear_solve) > 1e-9 * scale) {
    throw NumericalError("expected rounds disagree: summation " +
                         std::to_string(both.by_summation) + " vs linear solve " +
                         std::to_string(both.by_linear_solve));
  }
  return both.by_linear_solve;
}

double protocol_yield(const WalkSpec& spec, const HaltingOptions& options) {
  return 1.0 / expected_rounds(spec, options);
}

PathCount count_first_passage_paths(int d, long t) {
  if (d < 1) throw DomainError("path depth must be >= 1");
  if (t < d || (t - d) % 2 != 0) return 0;
  if (auto fast = first_passage_dp<std::uint64_t>(d, t)) {
    return PathCount(*fast);
  }
  return *first_passage_dp<PathCount>(d, t);
}

double sequence_probability(const DephasingChannel& channel, std::span<const int> outcomes) {
  double p = 1.0;
  int delta = 0;
  for (int m : outcomes) {
    if (m != 1 && m != -1) throw DomainError("outcomes must be +1 or -1");
    if (delta == 0) {
      p *= 0.5;
    } else {
      const double up = step_up_probability(channel, std::abs(delta));
      const bool away = (delta > 0) == (m > 0);
      p *= away ? up : 1.0 - up;
    }
    delta += m;
  }
  return p;
}

}  // namespace distill
