#ifndef DISTILL_WERNER_H_
#define DISTILL_WERNER_H_

#include <optional>
#include <vector>

#include "distill/bell_diagonal.h"
#include "distill/fidelity_analysis.h"

// Conversion of depolarized (Werner) pairs into dephased pairs by repeated
// post-selected ZZ checks, followed by the pumping protocol.
//
// Indexing: n = 1 is the raw Werner pair, so the state labelled n has been
// through n - 1 successful checks. At F0 = 0.85 the state labelled n = 5 has
// residual X/Y noise 1.69e-5.

namespace distill {

class WernerSource {
 public:
  explicit WernerSource(double f0);
  double f0() const { return f0_; }
  // Weight of each error component, (1 - F0) / 3.
  double error_weight() const { return (1.0 - f0_) / 3.0; }

 private:
  double f0_;
};

BellDiagonalState werner_coefficients(const WernerSource& source);

// a' = F0 a + q c,  c' = q a + F0 c,  b' = d' = q (b + d), with q = (1 - F0) / 3.
BellDiagonalState recursion_step(const BellDiagonalState& state, const WernerSource& source);

// Closed forms for the unnormalized weights of the state labelled n.
BellDiagonalState coefficients_after(const WernerSource& source, int n);

// Normalized X/Y weight: (1 + ((1 + 2F0) / (2 - 2F0))^n)^-1.
double residual_xy(const WernerSource& source, int n);
// Normalized Z weight c_n / (a_n + b_n + c_n + d_n).
double residual_z(const WernerSource& source, int n);

// Smallest n with residual_xy(n) <= target_xy.
int rounds_for_target(const WernerSource& source, double target_xy);

struct PipelineReport {
  WernerSource source;
  double target_xy = 0.0;
  int n = 1;
  double epsilon = 0.0;  // residual Z weight, fed to the pumping protocol
  double eta = 0.0;      // residual X/Y weight, taken as the per-round local error
  bool noiseless = false;
  std::optional<OptimalHalting> optimum{};
  // Success probability of each post-selected check, state n -> n + 1.
  std::vector<double> check_success{};
  // Expected raw pairs to build one state n, restarting on a failed check.
  double raw_pairs_per_dephased_pair = 1.0;
  double raw_pairs_per_distilled_pair = 0.0;
};

PipelineReport full_pipeline(const WernerSource& source, double target_xy, int delta_max = 64,
                             const HaltingOptions& options = {});

}  // namespace distill

#endif  // DISTILL_WERNER_H_
