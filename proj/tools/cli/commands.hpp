#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tdisp::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kGuard = 3 };

struct ClassifyConfig {
  std::string ring;  // overrides p when set
  int p = 2;
  int n = 1;
  int h = 1;
  std::optional<int> d;  // all types 0..h when absent
  std::string format = "json";
  std::string out = ".";
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  std::uint64_t budget = 10'000'000;
};

/// Writes one table per type and prints the mass check, nilpotent locus
/// and re-verification of the written tables. Nothing is written unless
/// every table was computed.
int cmd_classify(const ClassifyConfig& cfg, std::ostream& out, std::ostream& err);
/// File names written by cmd_classify for a given configuration.
std::vector<std::string> classify_outputs(const ClassifyConfig& cfg);

int cmd_witt(const std::string& expr, const std::string& ring, int level, std::ostream& out, std::ostream& err);

struct AnalyzeConfig {
  std::string file;
  std::string format = "text";
  std::uint64_t budget = 10'000'000;
};
int cmd_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tdisp::cli
