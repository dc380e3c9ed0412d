#ifndef DISTILL_WALK_ENGINE_H_
#define DISTILL_WALK_ENGINE_H_

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "distill/noise_model.h"

namespace distill {

// Position of the folded walk on |delta|.
struct ChainState {
  int d = 0;
  bool absorbed = false;
};

struct Transition {
  ChainState to;
  double probability;
};

/// One-round transitions of the folded chain out of transient depth d.
///
/// NPS: 0 -> 1 surely; d -> d+1 with P_d, d -> d-1 otherwise.
/// PS:  0 -> 1 surely; d -> d+1 with P_d, back to 0 otherwise.
/// Every transition, including a PS reset, costs exactly one round.
std::vector<Transition> transitions_from(const WalkSpec& spec, int d);

struct HaltingOptions {
  double tail_threshold = 1e-12;
  long max_rounds = 1'000'000;
};

/// Exact first-passage distribution of the halting round T.
///
/// Index i of `mass` and `cumulative` is the round count T = i (index 0 is
/// always empty). Probability not yet absorbed after the last tabulated round
/// is `tail_bound`.
struct HaltingDistribution {
  WalkSpec spec;
  std::vector<double> mass;
  std::vector<double> cumulative;
  double mean_rounds = 0.0;
  double tail_bound = 0.0;

  long last_round() const { return static_cast<long>(mass.size()) - 1; }
  double mass_at(long t) const;
  double cumulative_at(long t) const;
};

HaltingDistribution halting_distribution(const WalkSpec& spec, const HaltingOptions& options = {});

// Cumulative probability of having halted within t rounds.
double success_probability_by(const WalkSpec& spec, long t, const HaltingOptions& options = {});

/// Both routes to <T>: summation over the tabulated distribution (with a
/// geometric tail estimate) and the first-step linear system.
struct RoundsEstimate {
  double by_summation;
  double by_linear_solve;
};

RoundsEstimate expected_rounds_both(const WalkSpec& spec, const HaltingOptions& options = {});

// <T> from the linear solve, after checking the summation route agrees to 1e-9.
double expected_rounds(const WalkSpec& spec, const HaltingOptions& options = {});

// Distilled pairs per raw pair, 1 / <T>.
double protocol_yield(const WalkSpec& spec, const HaltingOptions& options = {});

using PathCount = boost::multiprecision::cpp_int;

// Number of signed +/-1 paths from 0 that first reach |delta| = d at step t.
PathCount count_first_passage_paths(int d, long t);

/// Probability of observing the exact outcome sequence (each +1 or -1) under the
/// signed walk, ignoring halting: 1/2 at delta = 0, otherwise P_|delta| toward
/// larger magnitude and 1 - P_|delta| toward smaller.
double sequence_probability(const DephasingChannel& channel, std::span<const int> outcomes);

}  // namespace distill

#endif  // DISTILL_WALK_ENGINE_H_
