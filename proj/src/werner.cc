#include "distill/werner.h"

#include <cmath>
#include <string>

#include "distill/errors.h"
#include "distill/quantum_oracle.h"

namespace distill {
namespace {

constexpr double kTieSlack = 1e-12;

void check_rounds(int n) {
  if (n < 1) throw DomainError("state label n must be >= 1, got " + std::to_string(n));
}

}  // namespace

BellDiagonalState BellDiagonalState::normalized_copy() const {
  const double t = total();
  if (!(t > 0.0)) throw NumericalError("cannot normalize zero Bell weights");
  return {a / t, b / t, c / t, d / t, true};
}

WernerSource::WernerSource(double f0) : f0_(f0) {
  if (!(f0 > 0.5 && f0 <= 1.0)) {
    throw DomainError("Werner fidelity must lie in (0.5, 1], got " + std::to_string(f0));
  }
}

BellDiagonalState werner_coefficients(const WernerSource& source) {
  const double q = source.error_weight();
  return {source.f0(), q, q, q, true};
}

BellDiagonalState recursion_step(const BellDiagonalState& s, const WernerSource& source) {
  const double f = source.f0();
  const double q = source.error_weight();
  const double xy = q * (s.b + s.d);
  return {f * s.a + q * s.c, xy, q * s.a + f * s.c, xy, false};
}

BellDiagonalState coefficients_after(const WernerSource& source, int n) {
  check_rounds(n);
  const double f = source.f0();
  const double even = std::pow((1.0 + 2.0 * f) / 3.0, n);  // a_n + c_n
  const double drift = std::pow((4.0 * f - 1.0) / 3.0, n);
  const double xy = 0.5 * std::pow(2.0 * (1.0 - f) / 3.0, n);
  const double c = 0.5 * (even - drift);
  BellDiagonalState out{even - c, xy, c, xy, false};
  out.normalized = n == 1;
  return out;
}

double residual_xy(const WernerSource& source, int n) {
  check_rounds(n);
  const double f = source.f0();
  if (f == 1.0) return 0.0;
  return 1.0 / (1.0 + std::pow((1.0 + 2.0 * f) / (2.0 - 2.0 * f), n));
}

double residual_z(const WernerSource& source, int n) {
  check_rounds(n);
  const double f = source.f0();
  // c_n / total, divided through by (a_n + c_n) so nothing underflows for large n.
  const double drift = std::pow((4.0 * f - 1.0) / (1.0 + 2.0 * f), n);
  const double odd = std::pow((2.0 - 2.0 * f) / (1.0 + 2.0 * f), n);
  return 0.5 * (1.0 - drift) / (1.0 + odd);
}

int rounds_for_target(const WernerSource& source, double target_xy) {
  const double first = residual_xy(source, 1);
  if (first == 0.0) return 1;  // F0 = 1: nothing to remove
  if (!(target_xy > 0.0 && target_xy <= first * (1.0 + kTieSlack))) {
    throw DomainError("target X/Y residual must lie in (0, " + std::to_string(first) + "]");
  }
  int n = 1;
  while (residual_xy(source, n) > target_xy * (1.0 + kTieSlack)) ++n;
  return n;
}

PipelineReport full_pipeline(const WernerSource& source, double target_xy, int delta_max,
                             const HaltingOptions& options) {
  PipelineReport report{.source = source, .target_xy = target_xy};
  report.n = rounds_for_target(source, target_xy);
  report.epsilon = residual_z(source, report.n);
  report.eta = residual_xy(source, report.n);

  // Check success probabilities come from the dense simulation of the circuit.
  const DensityOperator raw = werner_state(source.f0());
  DensityOperator target = raw;
  double cost = 1.0;
  for (int k = 1; k < report.n; ++k) {
    const DistillStepResult step = bilateral_distill_step(raw, target);
    report.check_success.push_back(step.success_probability);
    cost = (cost + 1.0) / step.success_probability;
    target = step.target;
  }
  report.raw_pairs_per_dephased_pair = cost;

  if (report.epsilon <= 0.0) {
    report.noiseless = true;
    report.raw_pairs_per_distilled_pair = cost;
    return report;
  }
  report.optimum =
      optimal_delta_h(DephasingChannel(report.epsilon), LocalErrorModel(report.eta), delta_max,
                      options);
  report.raw_pairs_per_distilled_pair = cost * report.optimum->report.mean_rounds;
  return report;
}

}  // namespace distill
