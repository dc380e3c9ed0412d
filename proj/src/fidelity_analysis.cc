#include "distill/fidelity_analysis.h"

#include <algorithm>
#include <string>

#include "distill/errors.h"

namespace distill {

LocalErrorModel::LocalErrorModel(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw DomainError("eta must lie in [0, 1), got " + std::to_string(eta));
  }
}

FidelityReport expected_fidelity(const WalkSpec& spec, const LocalErrorModel& model,
                                 const HaltingOptions& options) {
  const HaltingDistribution dist = halting_distribution(spec, options);
  const double eta = model.eta();
  const double f_halt = fidelity_of_delta(spec.channel(), spec.delta_h());
  // 1 - F(delta_h) directly, without cancellation.
  const double r = std::pow(spec.channel().alpha_squared(), -static_cast<double>(spec.delta_h()));
  const double f_loss = r / (1.0 + r);

  FidelityReport report{spec};
  report.eta = eta;
  report.mean_rounds = dist.mean_rounds;
  report.tail_bound = dist.tail_bound;

  double survival = 0.0;  // sum m(T) max(0, 1 - eta T)
  double lost = dist.tail_bound;  // tail + sum m(T) min(1, eta T)
  for (long t = 1; t <= dist.last_round(); ++t) {
    const double m = dist.mass_at(t);
    if (m == 0.0) continue;
    const double hazard = eta * static_cast<double>(t);
    if (hazard >= 1.0) report.clamp_activated = true;
    survival += m * std::max(0.0, 1.0 - hazard);
    lost += m * std::min(1.0, hazard);
  }
  report.expected_fidelity = f_halt * survival;
  report.expected_infidelity = f_loss + f_halt * lost;
  return report;
}

OptimalHalting optimal_delta_h(const DephasingChannel& channel, const LocalErrorModel& model,
                               int delta_max, const HaltingOptions& options) {
  if (delta_max < 1) throw DomainError("delta_max must be >= 1");
  std::optional<OptimalHalting> best;
  for (int h = 1; h <= delta_max; ++h) {
    FidelityReport report = expected_fidelity(WalkSpec(channel, h, Protocol::kNps), model, options);
    if (!best || report.expected_infidelity < best->report.expected_infidelity) {
      best = OptimalHalting{h, std::move(report), false};
    }
  }
  best->at_window_edge = best->delta_h == delta_max;
  return *best;
}

std::vector<InfidelityRow> infidelity_curve(std::span<const double> epsilons,
                                            const LocalErrorModel& model, int delta_max,
                                            const HaltingOptions& options) {
  if (epsilons.empty()) throw DomainError("epsilon grid must be nonempty");
  std::vector<InfidelityRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    InfidelityRow row;
    row.epsilon = eps;
    try {
      row.optimum = optimal_delta_h(DephasingChannel(eps), model, delta_max, options);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace distill
