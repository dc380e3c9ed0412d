#ifndef DISTILL_FIDELITY_ANALYSIS_H_
#define DISTILL_FIDELITY_ANALYSIS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distill/noise_model.h"
#include "distill/walk_engine.h"

namespace distill {

// Per-round probability of any error not removed by the distillation
// (faulty local operations, orthogonal channel noise). Any such error is
// treated as destroying the distilled link.
class LocalErrorModel {
 public:
  explicit LocalErrorModel(double eta);
  double eta() const { return eta_; }

 private:
  double eta_;
};

struct FidelityReport {
  WalkSpec spec;
  double eta = 0.0;
  double expected_fidelity = 0.0;
  double expected_infidelity = 0.0;
  double mean_rounds = 0.0;
  double tail_bound = 0.0;
  bool clamp_activated = false;  // some eta * T >= 1 carried halting mass
};

/// E(F) = F(delta_h) * sum_T m(T) max(0, 1 - eta T) over the tabulated
/// halting distribution. The infidelity is accumulated separately as
/// (1 - F) + F (tail + sum_T m(T) min(1, eta T)) to keep its relative precision.
FidelityReport expected_fidelity(const WalkSpec& spec, const LocalErrorModel& model,
                                 const HaltingOptions& options = {});

struct OptimalHalting {
  int delta_h = 0;
  FidelityReport report;
  bool at_window_edge = false;  // argmax sits at delta_max; widen the window
};

// Exhaustive NPS sweep over delta_h in 1..delta_max; ties go to the smaller delta_h.
OptimalHalting optimal_delta_h(const DephasingChannel& channel, const LocalErrorModel& model,
                               int delta_max = 64, const HaltingOptions& options = {});

struct InfidelityRow {
  double epsilon = 0.0;
  std::optional<OptimalHalting> optimum;
  std::string error;  // set instead of optimum when the point failed
};

std::vector<InfidelityRow> infidelity_curve(std::span<const double> epsilons,
                                            const LocalErrorModel& model, int delta_max = 64,
                                            const HaltingOptions& options = {});

}  // namespace distill

#endif  // DISTILL_FIDELITY_ANALYSIS_H_
