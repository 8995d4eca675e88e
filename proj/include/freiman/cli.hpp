#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace freiman::cli {

inline constexpr const char* kToolName = "freiman";
inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a job needs. Every field is echoed into the report header.
struct JobConfig {
  std::string command;
  /// Mode of recover / gamma.
  std::string mode;
  std::string input;
  std::string output;
  std::string format = "json";
  std::string epsilon;
  std::string eta;
  std::string delta;
  std::optional<std::int64_t> t;
  std::vector<std::string> k;
  std::vector<std::int64_t> s;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  unsigned workers = 1;
  std::string prop;
  std::string family = "all";
  std::int64_t lmin = 1;
  std::int64_t lmax = 12;
  std::int64_t nmin = 0;
  std::int64_t nmax = 64;
  std::int64_t samples = 0;
  std::int64_t keep = 20;
  std::optional<std::int64_t> modulus;
  std::string cex_dir = "counterexamples";
  /// Omits the generated= timestamp (for byte comparisons).
  bool no_timestamp = false;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitViolation = 2;

/// Runs one job. Reports go to config.output (or `out` when empty),
/// diagnostics to `err`.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a JobConfig and runs it.
int main(int argc, char** argv);

}  // namespace freiman::cli
