// Command-line surface. Exit codes: 0 success, 2 usage, 3 input, 4 numeric.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclose {

struct RunConfig {
  enum class Command { estimate, exact, sweep, distinguish, swap_test };
  enum class Format { text, csv, json };

  Command command = Command::exact;
  std::string method;  // estimate: td|sf|f2; sweep: a SweepMethod name
  std::string which;   // distinguish: td|f2
  double eps = 0.1;
  int trials = 300;
  int shots = 10000;        // swap-test
  int n = 8;                // distinguish distribution support size
  int rounds = 0;           // distinguish f2 amplification (0 = default)
  std::uint64_t seed = 12345;
  int jobs = 1;
  std::string state_a;
  std::string state_b;
  std::vector<double> eps_grid;  // sweep; empty = default grid
  std::string output;            // empty = stdout
  Format format = Format::text;
  std::string dump_state_a;  // exact: write resolved states back out
  std::string dump_state_b;
};

/// Exit codes for main(). kExitUsage also covers invalid parameter values.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitNumeric = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv (without the program name). Honors QCLOSE_SEED and
/// QCLOSE_JOBS env defaults. Throws UsageError on bad flags or values.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a validated config. Returns an exit code; never throws.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + run with exit-code mapping; the real main() is a one-liner.
int cli_main(int argc, char** argv);

}  // namespace qclose
