#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gnsharp {

/// Settings shared by every subcommand. Each subcommand fills in its own
/// defaults for the grid and family before parsing.
struct RunConfig {
  std::string group = "euclidean2";
  double p = 2.0;
  double q = 4.0;
  double a = 1.5;
  int N = 128;
  double L = 20.0;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
  std::string csv;
  bool allow_outside_hypotheses = false;
};

enum ExitCode : int { kExitPass = 0, kExitError = 1, kExitFail = 2 };

/// Checks the hypotheses a command relies on before any compute:
/// q > p, p ≤ Q/γ (ground-state), a > Q/q (bgw). Throws HypothesisError.
void validate_hypotheses(const std::string& command, const RunConfig& cfg);

/// Entry point: constants | ground-state | verify {gn,trudinger,bgw,bw,holder} | report.
/// Reports go to --out (or `out`), errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gnsharp
