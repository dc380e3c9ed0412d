#ifndef DISTILL_NOISE_MODEL_H_
#define DISTILL_NOISE_MODEL_H_

#include <optional>
#include <string_view>

namespace distill {

/// Single-Pauli (phase) noise on each raw Bell pair, with error rate epsilon.
///
/// Valid for 0 < epsilon < 1/2. The bias parameter alpha = sqrt(1/epsilon - 1)
/// is then strictly greater than one.
class DephasingChannel {
 public:
  explicit DephasingChannel(double epsilon);

  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }
  // alpha^2 = (1 - epsilon) / epsilon, the likelihood ratio of one outcome.
  double alpha_squared() const { return alpha_squared_; }

 private:
  double epsilon_;
  double alpha_squared_;
  double alpha_;
};

enum class Protocol {
  kNps,  // never post-select; halt when |delta| reaches the halting line
  kPs,   // reset to delta = 0 on any outcome disagreeing with the first
};

std::string_view protocol_name(Protocol protocol);
Protocol parse_protocol(std::string_view name);

/// Protocol parameters: channel, halting magnitude and protocol kind.
class WalkSpec {
 public:
  WalkSpec(DephasingChannel channel, int delta_h, Protocol protocol);

  // Derives the halting magnitude as the smallest one meeting f_target.
  static WalkSpec for_target(DephasingChannel channel, double f_target, Protocol protocol);

  const DephasingChannel& channel() const { return channel_; }
  int delta_h() const { return delta_h_; }
  Protocol protocol() const { return protocol_; }
  const std::optional<double>& target_fidelity() const { return target_fidelity_; }

  WalkSpec with_protocol(Protocol protocol) const;

 private:
  DephasingChannel channel_;
  int delta_h_;
  Protocol protocol_;
  std::optional<double> target_fidelity_;
};

// sqrt(1/epsilon - 1). Accepts the closed interval end epsilon = 1/2 (alpha = 1).
double alpha_of(double epsilon);

// F(delta) = (1 + alpha^(-2|delta|))^-1, even in delta.
double fidelity_of_delta(const DephasingChannel& channel, int delta);

/// Probability that the next outcome moves |delta| from d to d + 1.
///
/// P_d = ((1-eps) alpha^d + eps alpha^-d) / (alpha^d + alpha^-d). At d = 0 this
/// is 1/2: it is the probability of each *sign* of the first step. The folded
/// walk on |delta| moves 0 -> 1 with certainty; code working with signed paths
/// uses the 1/2 and counts both signs, code working with the folded chain uses 1
/// and counts only one. Mixing the two views double-counts.
double step_up_probability(const DephasingChannel& channel, int d);

// eps (1 - eps): probability of an up-then-down excursion, independent of depth.
double kink_probability(double epsilon);
double kink_probability(const DephasingChannel& channel);

// Smallest delta_h >= 1 with F(delta_h) >= f_target. Requires 1/2 < f_target < 1.
int min_delta_for_target(const DephasingChannel& channel, double f_target);

/// Probability of one particular signed path that first reaches |delta| = d at
/// round t: (prod_{j<d} P_j) * k^((t-d)/2), or 0 when t < d or t - d is odd.
double path_probability(const DephasingChannel& channel, int d, long t);

}  // namespace distill

#endif  // DISTILL_NOISE_MODEL_H_
