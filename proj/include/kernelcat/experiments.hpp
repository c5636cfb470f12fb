#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kernelcat/config.hpp"

namespace krn::cli {

struct Verdict {
  enum class Kind { Converged, Stabilized, StabilizedNoncauchy, Pass, Violation };

  Kind kind = Kind::Pass;
  std::optional<std::size_t> step;  // stabilization step, or first offending step
  std::string detail;

  bool ok() const { return kind != Kind::Violation; }
};

std::string to_string(Verdict::Kind k);

/// One line: "CONVERGED at step 10 (...)", "VIOLATION at step 3: ...".
std::string format(const Verdict& v);

struct RunResult {
  Verdict verdict;
  std::string csv;
};

/// Runs the experiment in memory. The CSV starts with `#` lines echoing the
/// configuration, then the header row and data, and ends with `#` lines
/// naming the result and the verdict.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Writes `csv` to `path`, creating parent directories. Throws IOError.
void write_output(const std::filesystem::path& path, const std::string& csv);

}  // namespace krn::cli
