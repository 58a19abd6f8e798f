#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace carlab::app {

enum class Format { json, csv };

/// One verdict, as emitted by every subcommand.
struct Check {
  std::string check_id;
  std::string paper_ref;      // statement the check exercises
  std::string inputs_digest;  // fnv1a-64 of the canonical JSON of the inputs, 16 hex digits
  double metric = 0;
  double tolerance = 0;
  bool pass = false;

  bool operator==(const Check&) const = default;
};

struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();  // canonical run configuration
  std::vector<Check> checks;
  nlohmann::json data = nlohmann::json::object();    // tables behind the checks (JSON output only)

  bool all_pass() const;
  /// Sorts checks by check_id so the body does not depend on evaluation order.
  void canonicalize();
};

std::string fnv1a_hex(std::string_view bytes);
std::string digest(const nlohmann::json& inputs);

/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

/// The header carries the only non-deterministic field (generated_at).
nlohmann::json to_json(const Report& report, bool with_header);
std::string to_csv(const Report& report, bool with_header);
std::string render(const Report& report, Format format, bool with_header);

/// Reads a report written by render() in either format; the format is detected from the content.
Report parse_report(std::string_view text);
Report read_report(const std::filesystem::path& path);

/// Throws ResourceError when the file cannot be written.
void write_text(const std::filesystem::path& path, std::string_view text);

std::string format_number(double value);

}  // namespace carlab::app
