#ifndef DISTILL_CLI_H_
#define DISTILL_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace distill::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kVerificationFailed = 2,
  kNonConvergence = 3,
};

/// Runs the command line `args` (args[0] is the program name). Tables and
/// reports go to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string which = "all";  // kink, parity-map, werner-step, mc-vs-exact, dominance, all
  std::optional<double> epsilon;
  std::optional<int> delta_h;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
};

struct VerifyResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<VerifyResult> run_verification(const VerifyOptions& options);

}  // namespace distill::cli

#endif  // DISTILL_CLI_H_
