#include "carlab/app/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "carlab/errors.hpp"

namespace carlab::app {

namespace {

constexpr std::string_view kColumns = "check_id,paper_ref,inputs_digest,metric,tolerance,pass";

nlohmann::json number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return std::stod(j.get<std::string>());
  throw ValidationError("report: metric/tolerance must be a number");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ValidationError("report: unterminated quote in CSV line");
  return fields;
}

Check check_from_json(const nlohmann::json& j) {
  Check c;
  c.check_id = j.at("check_id").get<std::string>();
  c.paper_ref = j.at("paper_ref").get<std::string>();
  c.inputs_digest = j.at("inputs_digest").get<std::string>();
  c.metric = number_from_json(j.at("metric"));
  c.tolerance = number_from_json(j.at("tolerance"));
  c.pass = j.at("pass").get<bool>();
  return c;
}

}  // namespace

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::canonicalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const Check& a, const Check& b) { return a.check_id < b.check_id; });
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest(const nlohmann::json& inputs) { return fnv1a_hex(inputs.dump()); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const Report& report, bool with_header) {
  Report sorted = report;
  sorted.canonicalize();
  nlohmann::json out = nlohmann::json::object();
  if (with_header) {
    out["header"] = {{"tool", "carlab"}, {"generated_at", utc_timestamp()}};
  }
  out["command"] = sorted.command;
  out["config"] = sorted.config;
  nlohmann::json checks = nlohmann::json::array();
  std::size_t passed = 0;
  for (const auto& c : sorted.checks) {
    checks.push_back({{"check_id", c.check_id},
                      {"paper_ref", c.paper_ref},
                      {"inputs_digest", c.inputs_digest},
                      {"metric", number_json(c.metric)},
                      {"tolerance", number_json(c.tolerance)},
                      {"pass", c.pass}});
    passed += c.pass;
  }
  out["checks"] = std::move(checks);
  out["summary"] = {{"total", sorted.checks.size()}, {"passed", passed}, {"pass", sorted.all_pass()}};
  if (!sorted.data.empty()) out["data"] = sorted.data;
  return out;
}

std::string to_csv(const Report& report, bool with_header) {
  Report sorted = report;
  sorted.canonicalize();
  std::ostringstream os;
  if (with_header) os << "# carlab " << sorted.command << " generated_at=" << utc_timestamp() << '\n';
  os << kColumns << '\n';
  for (const auto& c : sorted.checks) {
    os << csv_field(c.check_id) << ',' << csv_field(c.paper_ref) << ',' << csv_field(c.inputs_digest) << ','
       << format_number(c.metric) << ',' << format_number(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string render(const Report& report, Format format, bool with_header) {
  if (format == Format::csv) return to_csv(report, with_header);
  return to_json(report, with_header).dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ValidationError("report: empty input");
  Report rep;
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("report: ") + e.what());
    }
    rep.command = j.value("command", "");
    rep.config = j.value("config", nlohmann::json::object());
    if (j.contains("data")) rep.data = j["data"];
    try {
      for (const auto& c : j.at("checks")) rep.checks.push_back(check_from_json(c));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("report: ") + e.what());
    }
    return rep;
  }
  std::istringstream is{std::string(text)};
  std::string line;
  bool seen_columns = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto pos = line.find("carlab ");
      if (pos != std::string::npos) {
        const auto rest = line.substr(pos + 7);
        rep.command = rest.substr(0, rest.find(' '));
      }
      continue;
    }
    if (!seen_columns) {
      if (line != kColumns) throw ValidationError("report: unexpected CSV columns at line " + std::to_string(line_no));
      seen_columns = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw ValidationError("report: expected 6 CSV fields at line " + std::to_string(line_no));
    Check c{f[0], f[1], f[2], 0, 0, f[5] == "true"};
    try {
      c.metric = std::stod(f[3]);
      c.tolerance = std::stod(f[4]);
    } catch (const std::exception&) {
      throw ValidationError("report: bad number at line " + std::to_string(line_no));
    }
    if (f[5] != "true" && f[5] != "false") throw ValidationError("report: bad pass flag at line " + std::to_string(line_no));
    rep.checks.push_back(std::move(c));
  }
  if (!seen_columns) throw ValidationError("report: no CSV column row");
  return rep;
}

Report read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_report(ss.str());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw ResourceError("write failed for " + path.string());
}

}  // namespace carlab::app
