#include "distill/noise_model.h"

#include <cmath>
#include <limits>
#include <string>

#include "distill/errors.h"

namespace distill {
namespace {

// Relative slack used when a closed form is compared against a user threshold,
// so that exact ties such as F(1) = 0.8 at eps = 0.2 resolve as ">=".
constexpr double kTieSlack = 1e-15;

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("epsilon must lie in the open interval (0, 0.5), got " +
                      std::to_string(epsilon));
  }
}

// alpha^(-2d), which only underflows (never overflows) for alpha > 1.
double inverse_alpha_power(const DephasingChannel& channel, int d) {
  return std::pow(channel.alpha_squared(), -static_cast<double>(d));
}

}  // namespace

DephasingChannel::DephasingChannel(double epsilon) : epsilon_(epsilon) {
  check_epsilon(epsilon);
  alpha_squared_ = 1.0 / epsilon - 1.0;
  alpha_ = std::sqrt(alpha_squared_);
}

std::string_view protocol_name(Protocol protocol) {
  return protocol == Protocol::kNps ? "nps" : "ps";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "nps") return Protocol::kNps;
  if (name == "ps") return Protocol::kPs;
  throw DomainError("unknown protocol '" + std::string(name) + "' (expected nps or ps)");
}

WalkSpec::WalkSpec(DephasingChannel channel, int delta_h, Protocol protocol)
    : channel_(channel), delta_h_(delta_h), protocol_(protocol) {
  if (delta_h < 1) {
    throw DomainError("halting magnitude must be >= 1, got " + std::to_string(delta_h));
  }
}

WalkSpec WalkSpec::for_target(DephasingChannel channel, double f_target, Protocol protocol) {
  WalkSpec spec(channel, min_delta_for_target(channel, f_target), protocol);
  spec.target_fidelity_ = f_target;
  return spec;
}

WalkSpec WalkSpec::with_protocol(Protocol protocol) const {
  WalkSpec copy = *this;
  copy.protocol_ = protocol;
  return copy;
}

double alpha_of(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw DomainError("alpha is defined for epsilon in (0, 0.5], got " + std::to_string(epsilon));
  }
  return std::sqrt(1.0 / epsilon - 1.0);
}

double fidelity_of_delta(const DephasingChannel& channel, int delta) {
  const int magnitude = std::abs(delta);
  // r / (r + 1) keeps small cases exact (e.g. 4/5, 9/10); fall back once r overflows.
  const double r = std::pow(channel.alpha_squared(), static_cast<double>(magnitude));
  if (std::isfinite(r)) {
    return r / (r + 1.0);
  }
  return 1.0 / (1.0 + inverse_alpha_power(channel, magnitude));
}

double step_up_probability(const DephasingChannel& channel, int d) {
  if (d < 0) {
    throw DomainError("walk depth must be nonnegative, got " + std::to_string(d));
  }
  const double eps = channel.epsilon();
  const double s = inverse_alpha_power(channel, d);
  return ((1.0 - eps) + eps * s) / (1.0 + s);
}

double kink_probability(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw DomainError("epsilon must lie in (0, 0.5], got " + std::to_string(epsilon));
  }
  return epsilon * (1.0 - epsilon);
}

double kink_probability(const DephasingChannel& channel) {
  return kink_probability(channel.epsilon());
}

int min_delta_for_target(const DephasingChannel& channel, double f_target) {
  if (!(f_target > 0.5 && f_target < 1.0)) {
    throw DomainError("target fidelity must lie in (0.5, 1), got " + std::to_string(f_target));
  }
  auto meets = [&](int delta) {
    return fidelity_of_delta(channel, delta) >= f_target * (1.0 - kTieSlack);
  };
  // F(D) >= f  <=>  D >= logit(f) / ln(alpha^2); start there and correct rounding.
  const double estimate =
      std::log(f_target / (1.0 - f_target)) / std::log(channel.alpha_squared());
  int delta = std::max(1, static_cast<int>(std::ceil(estimate)));
  while (delta > 1 && meets(delta - 1)) --delta;
  while (!meets(delta)) {
    if (delta == std::numeric_limits<int>::max()) {
      throw DomainError("target fidelity not reachable in integer range");
    }
    ++delta;
  }
  return delta;
}

double path_probability(const DephasingChannel& channel, int d, long t) {
  if (d < 1) {
    throw DomainError("path depth must be >= 1, got " + std::to_string(d));
  }
  if (t < d || (t - d) % 2 != 0) {
    return 0.0;
  }
  // Summed in log space: long excursions multiply many factors < 1.
  double log_p = 0.0;
  for (int j = 0; j < d; ++j) {
    log_p += std::log(step_up_probability(channel, j));
  }
  log_p += static_cast<double>((t - d) / 2) * std::log(kink_probability(channel));
  return std::exp(log_p);
}

}  // namespace distill
