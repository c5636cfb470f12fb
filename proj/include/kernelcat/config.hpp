#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "kernelcat/errors.hpp"
#include "kernelcat/random_var.hpp"

// Experiment configuration. The file grammar is described in
// docs/config-format.md.

namespace krn::cli {

enum class Experiment {
  LevyUp,
  LevyDown,
  LeviKernel,
  LeviHilbert,
  NoncauchyL1,
  BanachCounterexample,
  GaloisAudit,
  HomeoAudit,
};

std::string to_string(Experiment e);
const std::vector<std::string>& experiment_names();
Experiment parse_experiment(const std::string& name);

enum class Mode { Float, Rational };

std::string to_string(Mode m);

struct ExperimentConfig {
  Experiment experiment = Experiment::LevyUp;
  Mode mode = Mode::Rational;
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 1;
  std::size_t horizon = 0;  // 0: the experiment's own default
  LnExponent exponent = LnExponent(2);
  std::string direction = "increasing";

  // [sizes]
  std::size_t K = 10;
  std::size_t N = 16;
  std::size_t d = 3;
  std::size_t size = 5;
  std::size_t trials = 20;

  // [output]
  std::filesystem::path dir = ".";
  std::string file;  // empty: <experiment>.csv

  /// Directory from KERNELCAT_OUTPUT_DIR when set, else `dir`, joined with
  /// the file name.
  std::filesystem::path output_path() const;
};

/// One problem found by validation, with the offending field and, for parse
/// failures, the line.
struct Diagnostic {
  std::string field;
  std::size_t line = 0;
  std::string message;
};

std::string format(const Diagnostic& d);

/// Parses and validates. Throws ParseError for malformed text and
/// ConfigError for well-formed text with invalid content; the message
/// carries every diagnostic, one per line.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Collects every diagnostic instead of throwing at the first one.
std::vector<Diagnostic> validate_config(std::istream& in);

/// The canonical configuration behind `demo <name>`.
ExperimentConfig demo_config(Experiment e);

/// Closest names by edit distance, for "did you mean" hints.
std::vector<std::string> suggestions(const std::string& word, const std::vector<std::string>& candidates);

}  // namespace krn::cli
