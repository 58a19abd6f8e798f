#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "carlab/app/report.hpp"

namespace carlab::app {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kValidationError = 2, kResourceError = 3 };

/// Everything that determines a run. Same config, same report body.
struct RunConfig {
  std::string command;
  std::vector<int> modes{4};
  std::vector<std::string> r_list{"2"};  // exponents as typed; parsed by parse_exponent
  int trials = 10;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;  // overrides every check's default tolerance
  std::string out;                  // empty: <output dir>/<command>.<ext>; "-": stdout
  Format format = Format::json;
  bool header = true;

  // verify-bounds
  std::string which = "dGamma";
  std::vector<double> diag;  // diagonal one-body argument instead of random draws
  std::string matrix_file;   // JSON [[ [re, im], ... ], ...], row-major

  // gaussian-check
  double grid_radius = 2.0;
  int grid_points = 5;

  // sweep-sharpness
  double s = 1.0;
  std::size_t n_min = 10;
  std::size_t n_max = 100000;
  bool harmonic = false;

  // report
  std::vector<std::string> inputs;

  /// Canonical JSON of the fields the command reads; stored in the report and hashed into digests.
  nlohmann::json to_json() const;
};

/// "1-8", "2,4,6" or a mix; every entry must be in [1, FockSpace::kMaxModes].
std::vector<int> parse_mode_list(const std::string& text);

/// Evaluates the command. Throws ValidationError / ResourceError on bad input.
Report execute(const RunConfig& config);

/// Output location: config.out, else $CARLAB_OUTPUT_DIR (or the working directory) joined with <command>.<ext>.
std::filesystem::path output_path(const RunConfig& config);

/// execute + write (to `out` when config.out is "-") + one summary line on `log`; returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// argv front end. Parse errors exit with kValidationError.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Reads an operator file; throws ValidationError on malformed content.
std::vector<std::vector<std::complex<double>>> read_matrix_file(const std::filesystem::path& path);

}  // namespace carlab::app
