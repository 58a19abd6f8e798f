#include "carlab/app/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <new>
#include <sstream>

#include <CLI11.hpp>

#include "carlab/bounds.hpp"
#include "carlab/car.hpp"
#include "carlab/converse.hpp"
#include "carlab/errors.hpp"
#include "carlab/gaussian.hpp"
#include "carlab/quadratics.hpp"

namespace carlab::app {

namespace {

using Op = OneBodyOperator<cd>;
using nlohmann::json;

std::string pad(long value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width - static_cast<int>(s.size())), '0');
  return s;
}

std::string mode_tag(int m) { return "m=" + pad(m, 2); }
std::string trial_tag(int t) { return "t=" + pad(t, 3); }

/// Independent stream per (command, m): the same trial index never reuses draws across mode counts.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view tag, int m) {
  std::uint64_t h = 0;
  for (unsigned char c : tag) h = splitmix64(h ^ c);
  return seed ^ splitmix64(h + static_cast<std::uint64_t>(m));
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

struct Builder {
  const RunConfig& config;
  Report report;

  explicit Builder(const RunConfig& c) : config(c) {
    report.command = c.command;
    report.config = c.to_json();
  }

  double tol(double fallback) const { return config.tolerance.value_or(fallback); }

  /// metric <= tolerance
  void upper(std::string id, std::string ref, const json& inputs, double metric, double tolerance) {
    report.checks.push_back({std::move(id), std::move(ref), digest(inputs), metric, tolerance, metric <= tolerance});
  }

  void add(std::string id, std::string ref, const json& inputs, double metric, double tolerance, bool pass) {
    report.checks.push_back({std::move(id), std::move(ref), digest(inputs), metric, tolerance, pass});
  }
};

json base_inputs(const RunConfig& c, int m) {
  return {{"command", c.command}, {"m", m}, {"seed", c.seed}};
}

// ---------------------------------------------------------------- verify-car

Report verify_car_command(const RunConfig& c) {
  Builder b(c);
  if (c.trials < 1) throw ValidationError("--trials must be >= 1");
  for (int m : c.modes) {
    const FockSpace space(m);
    const auto rep = verify_car<cd>(space, c.trials, stream_seed(c.seed, "verify-car", m));
    json inputs = base_inputs(c, m);
    inputs["trials"] = c.trials;
    const std::string prefix = "verify-car/" + mode_tag(m) + "/";
    const double alg = b.tol(tol::kAlgebraic);
    b.upper(prefix + "anticommutator_aa", "{a(f), a(g)} = 0", inputs, rep.anticommutator_aa, alg);
    b.upper(prefix + "anticommutator_adag_adag", "{a*(f), a*(g)} = 0", inputs, rep.anticommutator_adag_adag, alg);
    b.upper(prefix + "anticommutator_mixed", "{a(f), a*(g)} = (conj f, g) Id", inputs, rep.anticommutator_mixed, alg);
    b.upper(prefix + "unitarity", "a(f)^* = a*(conj f)", inputs, rep.unitarity, alg);
    b.upper(prefix + "projection", "P = a*(f) a(conj f) satisfies P^2 = |f|^2 P", inputs, rep.projection, alg);
    b.upper(prefix + "projection_adjoint", "P = a*(f) a(conj f) is self-adjoint", inputs, rep.projection_adjoint, alg);
    b.upper(prefix + "norm_identity", "|a(f)| = |a*(f)| = |f|", inputs, rep.norm_identity, b.tol(tol::kNorm));
  }
  return std::move(b.report);
}

// ------------------------------------------------------------- verify-bounds

std::string bound_statement(BoundKind kind) {
  switch (kind) {
    case BoundKind::dGamma: return "dGamma(B)^* dGamma(B) <= |B|_r^2 N^s (+ |B|_2^2 for 1<r<2), s = 2(r-1)/r";
    case BoundKind::Delta: return "Delta(A)^* Delta(A) <= |A|_r^2 N^s + |A|_2^2 (|A|_1^2 at r=1), 1<=r<=2";
    case BoundKind::DeltaPlus: return "Delta+(C)^* Delta+(C) <= |C|_r^2 N^s + 3|C|_2^2 (|C|_1^2 at r=1), 1<=r<=2";
    case BoundKind::basic: return "sum_j lambda_j a*(e_j) a(conj e_j) <= |lambda|_p N^(1/q)";
    case BoundKind::literature_dGamma: return "dGamma(B)^* dGamma(B) <= |B|_inf^2 N^2";
    case BoundKind::literature_Delta: return "Delta(A)^* Delta(A) <= |A|_2^2 N^2";
    case BoundKind::literature_DeltaPlus: return "Delta+(C)^* Delta+(C) <= |C|_2^2 (N+2)^2";
    case BoundKind::improved_r2: return "Delta+(C)^* Delta+(C) <= |C|_2^2 (N + 2 Id)";
  }
  return "";
}

Op fixed_argument(const RunConfig& c, json& source) {
  if (!c.diag.empty() && !c.matrix_file.empty()) throw ValidationError("--diag and --matrix-file are exclusive");
  if (!c.diag.empty()) {
    VectorXcd d(static_cast<Eigen::Index>(c.diag.size()));
    for (std::size_t i = 0; i < c.diag.size(); ++i) d(static_cast<Eigen::Index>(i)) = c.diag[i];
    source = {{"diag", c.diag}};
    return Op::diagonal(d);
  }
  const auto rows = read_matrix_file(c.matrix_file);
  const auto n = static_cast<Eigen::Index>(rows.size());
  MatrixXcd mat(n, n);
  json flat = json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      mat(i, j) = rows[std::size_t(i)][std::size_t(j)];
      flat.push_back({mat(i, j).real(), mat(i, j).imag()});
    }
  }
  source = {{"matrix", flat}};
  return Op(mat);
}

Report verify_bounds_command(const RunConfig& c) {
  Builder b(c);
  const BoundKind kind = parse_bound_kind(c.which);
  std::vector<std::pair<std::string, BoundSpec>> specs;
  for (const auto& token : c.r_list) specs.emplace_back(token, make_bound_spec(kind, parse_exponent(token)));
  if (specs.empty()) throw ValidationError("--r needs at least one exponent");
  if (c.trials < 1) throw ValidationError("--trials must be >= 1");

  std::optional<Op> fixed;
  json source = "random";
  std::vector<int> modes = c.modes;
  int trials = c.trials;
  if (!c.diag.empty() || !c.matrix_file.empty()) {
    fixed = fixed_argument(c, source);
    modes = {fixed->size()};
    trials = 1;
  }

  json rows = json::array();
  BoundOptions options;
  if (c.tolerance) options.tolerance = *c.tolerance;
  for (const auto& [token, spec] : specs) {
    for (int m : modes) {
      const FockSpace space(m);
      const std::uint64_t seed = stream_seed(c.seed, "verify-bounds", m);
      ArgumentMaker<cd> maker;
      if (fixed) maker = [&](int, Rng&) { return *fixed; };
      const std::vector<int> family{m};
      const auto sweep = bound_sweep<cd>(family, spec, trials, seed, maker);
      for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::for_trial(seed, (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint64_t>(t));
        const Op arg = fixed ? *fixed : random_argument<cd>(spec, m, rng);
        const auto verdict = verify_bound(space, spec, arg, options);
        json inputs = base_inputs(c, m);
        inputs.update({{"which", c.which}, {"r", number(spec.r)}, {"trial", t}, {"argument", source}});
        b.add("verify-bounds/" + c.which + "/r=" + token + "/" + mode_tag(m) + "/" + trial_tag(t),
              bound_statement(kind), inputs, verdict.slack_min, verdict.tolerance, verdict.pass);
        const auto& row = sweep[static_cast<std::size_t>(t)];
        rows.push_back({{"r", token}, {"m", m}, {"trial", t}, {"slack_min", number(row.slack_min)},
                        {"max_ratio", number(row.max_ratio)}});
      }
    }
  }
  b.report.data["sweep"] = std::move(rows);
  return std::move(b.report);
}

// ------------------------------------------------------------ verify-algebra

double grading_leak(const FockOperator<cd>& op) {
  const auto& space = op.space;
  double leak = 0;
  for (std::size_t row = 0; row < space.dim(); ++row) {
    for (std::size_t col = 0; col < space.dim(); ++col) {
      if (space.particle_number(row) - space.particle_number(col) == *op.grading_shift) continue;
      leak = std::max(leak, std::abs(op.matrix(Eigen::Index(row), Eigen::Index(col))));
    }
  }
  return leak;
}

Report verify_algebra_command(const RunConfig& c) {
  Builder b(c);
  if (c.trials < 1) throw ValidationError("--trials must be >= 1");
  {
    const FockSpace two(2);
    MatrixXcd j(2, 2);
    j << 0.0, -1.0, 1.0, 0.0;
    const auto lhs = commutator(delta(two, Op(MatrixXcd(-j))), delta_plus(two, Op(j)));
    const MatrixXcd expected = -4.0 * number_operator(two).matrix + 4.0 * identity(two).matrix;
    b.upper("verify-algebra/commutator/hand_m2_A=-C", "[Delta(A), Delta+(C)] = -4 N + 4 Id for C = [[0,-1],[1,0]], A = -C",
            json{{"command", c.command}, {"case", "hand_m2"}}, max_abs(MatrixXcd(lhs.matrix - expected)),
            c.tolerance.value_or(0.0));
  }
  for (int m : c.modes) {
    const FockSpace space(m);
    detail::require_dense(space);
    const std::uint64_t seed = stream_seed(c.seed, "verify-algebra", m);
    for (int t = 0; t < c.trials; ++t) {
      Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
      const Op a(random_skew(m, rng)), cc(random_skew(m, rng)), bb(ginibre(m, rng));
      json inputs = base_inputs(c, m);
      inputs["trial"] = t;
      const std::string prefix = "verify-algebra/" + mode_tag(m) + "/" + trial_tag(t) + "/";

      const auto com = check_commutator(space, a, cc);
      b.upper(prefix + "commutator", "[Delta(A), Delta+(C)] = -4 dGamma(CA) + 2 tr(AC) Id", inputs, com.residual,
              b.tol(com.tolerance) * com.scale);

      const auto dg = d_gamma(space, bb);
      const auto dl = delta(space, a);
      const auto dp = delta_plus(space, cc);
      const double adj_g = max_abs(MatrixXcd(dg.adjoint().matrix - d_gamma(space, bb.adjoint()).matrix));
      b.upper(prefix + "adjoint_dGamma", "dGamma(B)^* = dGamma(B^*)", inputs, adj_g,
              b.tol(tol::kAlgebraic) * (1 + max_abs(dg.matrix)));
      const double adj_d = max_abs(MatrixXcd(dl.adjoint().matrix - delta_plus(space, a.adjoint()).matrix));
      b.upper(prefix + "adjoint_Delta", "Delta(A)^* = Delta+(A^*)", inputs, adj_d,
              b.tol(tol::kAlgebraic) * (1 + max_abs(dl.matrix)));
      b.upper(prefix + "grading_dGamma", "dGamma(B) preserves particle number", inputs, grading_leak(dg),
              b.tol(tol::kSymmetry));
      b.upper(prefix + "grading_Delta", "Delta(A) lowers particle number by 2", inputs, grading_leak(dl),
              b.tol(tol::kSymmetry));
      b.upper(prefix + "grading_DeltaPlus", "Delta+(C) raises particle number by 2", inputs, grading_leak(dp),
              b.tol(tol::kSymmetry));
    }
  }
  return std::move(b.report);
}

// ------------------------------------------------------------ gaussian-check

Report gaussian_check_command(const RunConfig& c) {
  Builder b(c);
  if (c.trials < 1) throw ValidationError("--trials must be >= 1");
  if (!(c.grid_radius > 0) || c.grid_points < 1) throw ValidationError("--grid-radius and --grid-points must be positive");
  const auto grid = complex_grid(c.grid_radius, c.grid_points);

  const auto cal = calibrate_determinant_convention(20, c.seed);
  b.add("gaussian-check/calibration", "omega(z) = det(Id + 4 z^2 C^*C)^(1/2), reference m=2, mu=1/2, z=1 gives 2",
        json{{"command", c.command}, {"seed", c.seed}, {"random_cases", 20}}, std::abs(cal.reference_series - 2.0),
        b.tol(tol::kAlgebraic),
        cal.convention == DeterminantConvention::square_root && std::abs(cal.reference_series - 2.0) <= b.tol(tol::kAlgebraic));

  std::optional<Op> fixed;
  json source = "random";
  std::vector<int> modes = c.modes;
  int trials = c.trials;
  if (!c.matrix_file.empty()) {
    RunConfig only_matrix = c;
    only_matrix.diag.clear();
    fixed = fixed_argument(only_matrix, source);
    modes = {fixed->size()};
    trials = 1;
  }

  json cases = json::array();
  for (int m : modes) {
    const FockSpace space(m);
    const std::uint64_t seed = stream_seed(c.seed, "gaussian-check", m);
    for (int t = 0; t < trials; ++t) {
      Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
      const Op cc = fixed ? *fixed : Op(random_skew(m, rng));
      const auto rep = gaussian_report(space, cc, grid);
      json inputs = base_inputs(c, m);
      inputs.update({{"trial", t}, {"grid_radius", c.grid_radius}, {"grid_points", c.grid_points}, {"argument", source}});
      const std::string prefix = "gaussian-check/" + mode_tag(m) + "/" + trial_tag(t) + "/";
      b.upper(prefix + "series_vs_determinant", "sum_n c_n z^(2n) = det(Id + 4 z^2 C^*C)^(1/2)", inputs,
              rep.max_abs_diff, b.tol(1e-10));
      b.upper(prefix + "zeros", "zeros +-i/(2 mu_j) = roots of the even series", inputs, rep.zero_match,
              b.tol(1e-8));
      double odd = 0;
      for (const auto z : grid) {
        odd = std::max(odd, std::abs(evaluate_even_series(rep.coefficients, z) - evaluate_even_series(rep.coefficients, -z)));
      }
      b.upper(prefix + "evenness", "omega(z) = omega(-z)", inputs, odd, b.tol(1e-12));
      json zeros = json::array();
      for (const auto z : rep.zeros) zeros.push_back({z.real(), z.imag()});
      cases.push_back({{"m", m}, {"trial", t}, {"coefficients", rep.coefficients}, {"zeros", zeros}});
    }
  }

  for (double r : {1.0, 1.5, 2.0}) {
    std::vector<double> log_abs;
    for (int n = 0; n < 200; ++n) log_abs.push_back(-2.0 * std::lgamma(n + 1.0) / r);
    const auto est = exp_order_estimate(log_abs, 2);
    b.upper("gaussian-check/order/r=" + format_number(r), "sum z^(2n)/(n!)^(2/r) has exponential order r",
            json{{"command", c.command}, {"family_r", r}, {"terms", 200}}, std::abs(est.order - r), b.tol(0.05));
  }
  b.report.data["cases"] = std::move(cases);
  return std::move(b.report);
}

// ------------------------------------------------------------ sweep-sharpness

Report sweep_sharpness_command(const RunConfig& c) {
  Builder b(c);
  const DecayKind kind = c.harmonic ? DecayKind::harmonic : DecayKind::power_decay;
  const auto grid = log_grid(c.n_min, c.n_max);
  const auto res = sharpness_sweep(kind, c.s, grid);
  const std::string family = c.harmonic ? "harmonic" : "power_decay/s=" + format_number(c.s);
  json inputs = {{"command", c.command}, {"family", family}, {"n_min", c.n_min}, {"n_max", c.n_max}};
  const double slope_tol = b.tol(0.02);
  b.add("sweep-sharpness/" + family + "/slope",
        c.harmonic ? "sum_{j<=n} 1/j grows like log n (slope of H_n against log n is 1)"
                   : "sum_{j<=n} mu_j grows like n^(s/2) for mu_j = j^(s/2-1)",
        inputs, res.slope, slope_tol, std::abs(res.slope - res.target_slope) <= slope_tol);
  if (c.harmonic) {
    const double euler_gamma = 0.57721566490153286;
    const double h = res.sector_norms.back();
    const double bound = 1.0 / (2.0 * static_cast<double>(c.n_max));
    b.add("sweep-sharpness/harmonic/H_n_max", "H_n = log n + Euler gamma + O(1/(2n))", inputs, h, bound,
          std::abs(h - std::log(double(c.n_max)) - euler_gamma) <= bound);
  } else {
    const std::vector<double> eps{0.0, 0.1};
    const auto rec = schatten_recovery_check(c.s, eps);
    for (const auto& row : rec.rows) {
      json rin = inputs;
      rin.update({{"epsilon", row.epsilon}, {"terms", rec.terms}});
      const std::string id = "sweep-sharpness/" + family + "/recovery/eps=" + format_number(row.epsilon);
      if (row.epsilon == 0) {
        b.add(id, "sum_j mu_j^r diverges at r = 2/(2-s): each decade adds log 10",
              rin, std::abs(row.decade_increment - std::log(10.0)), 1e-4, row.certified_divergent);
      } else {
        b.add(id, "sum_j mu_j^(r+eps) converges for eps > 0 (integral test)", rin, row.upper_total - row.partial_sum,
              0.0, row.certified_convergent);
      }
    }
  }
  json rows = json::array();
  for (std::size_t i = 0; i < res.n.size(); ++i) rows.push_back({{"n", res.n[i]}, {"sector_norm", res.sector_norms[i]}});
  b.report.data["sweep"] = {{"window", {res.window_lo, res.window_hi}}, {"target_slope", res.target_slope}, {"rows", rows}};
  return std::move(b.report);
}

// -------------------------------------------------------------------- report

Report report_command(const RunConfig& c) {
  if (c.inputs.empty()) throw ValidationError("report needs at least one input file");
  Report merged;
  merged.command = c.command;
  merged.config = c.to_json();
  json sources = json::array();
  for (const auto& path : c.inputs) {
    const Report part = read_report(path);
    sources.push_back({{"file", std::filesystem::path(path).filename().string()}, {"command", part.command},
                       {"checks", part.checks.size()}});
    for (const auto& check : part.checks) {
      if (std::find(merged.checks.begin(), merged.checks.end(), check) == merged.checks.end()) {
        merged.checks.push_back(check);
      }
    }
  }
  merged.data["sources"] = std::move(sources);
  return merged;
}

void add_common(CLI::App* sub, RunConfig& c, std::string& modes, std::string& format, bool& no_header) {
  sub->add_option("--m", modes, "mode counts, e.g. 4, 2-7 or 2,4,6");
  sub->add_option("--trials", c.trials, "seeded random instances per configuration");
  sub->add_option("--seed", c.seed, "64-bit seed");
  sub->add_option("--tolerance", c.tolerance, "override every check's tolerance");
  sub->add_option("--out", c.out, "output file, '-' for stdout");
  sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--no-header", no_header, "omit the header (the only field with a timestamp)");
}

}  // namespace

json RunConfig::to_json() const {
  json j = {{"command", command}, {"seed", seed}, {"tolerance", tolerance ? json(*tolerance) : json(nullptr)},
            {"format", format == Format::csv ? "csv" : "json"}};
  if (command == "verify-car" || command == "verify-algebra") {
    j.update({{"m", modes}, {"trials", trials}});
  } else if (command == "verify-bounds") {
    j.update({{"which", which}, {"r", r_list}, {"m", modes}, {"trials", trials}, {"diag", diag},
              {"matrix_file", matrix_file}});
  } else if (command == "gaussian-check") {
    j.update({{"m", modes}, {"trials", trials}, {"grid_radius", grid_radius}, {"grid_points", grid_points},
              {"matrix_file", matrix_file}});
  } else if (command == "sweep-sharpness") {
    j.update({{"s", s}, {"n_min", n_min}, {"n_max", n_max}, {"harmonic", harmonic}});
  } else if (command == "report") {
    json names = json::array();
    for (const auto& p : inputs) names.push_back(std::filesystem::path(p).filename().string());
    j["inputs"] = names;
  }
  return j;
}

std::vector<int> parse_mode_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ValidationError("--m: cannot parse '" + s + "'");
    if (v < 1 || v > FockSpace::kMaxModes) {
      throw ValidationError("--m: mode counts must lie in [1, " + std::to_string(FockSpace::kMaxModes) + "], got " + s);
    }
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = to_int(item.substr(0, dash));
      const int hi = to_int(item.substr(dash + 1));
      if (hi < lo) throw ValidationError("--m: empty range '" + item + "'");
      for (int m = lo; m <= hi; ++m) out.push_back(m);
    } else {
      out.push_back(to_int(item));
    }
  }
  if (out.empty()) throw ValidationError("--m: no mode counts given");
  return out;
}

std::vector<std::vector<std::complex<double>>> read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot read matrix file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("matrix file " + path.string() + ": " + e.what());
  }
  if (!j.is_array() || j.empty()) throw ValidationError("matrix file: expected a non-empty array of rows");
  const std::size_t n = j.size();
  std::vector<std::vector<std::complex<double>>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != n) {
      throw ValidationError("matrix file: row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    std::vector<std::complex<double>> r;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ValidationError("matrix file: entry (" + std::to_string(i) + ", " + std::to_string(k) +
                              ") must be [re, im]");
      }
      r.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Report execute(const RunConfig& config) {
  Report rep;
  if (config.command == "verify-car") rep = verify_car_command(config);
  else if (config.command == "verify-bounds") rep = verify_bounds_command(config);
  else if (config.command == "verify-algebra") rep = verify_algebra_command(config);
  else if (config.command == "gaussian-check") rep = gaussian_check_command(config);
  else if (config.command == "sweep-sharpness") rep = sweep_sharpness_command(config);
  else if (config.command == "report") rep = report_command(config);
  else throw ValidationError("unknown command '" + config.command + "'");
  rep.canonicalize();
  return rep;
}

std::filesystem::path output_path(const RunConfig& config) {
  if (!config.out.empty()) return config.out;
  const char* env = std::getenv("CARLAB_OUTPUT_DIR");
  const std::filesystem::path dir = env && *env ? std::filesystem::path(env) : std::filesystem::current_path();
  return dir / (config.command + (config.format == Format::csv ? ".csv" : ".json"));
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const Report rep = execute(config);
  const std::string text = render(rep, config.format, config.header);
  std::size_t passed = 0;
  for (const auto& c : rep.checks) passed += c.pass;
  if (config.out == "-") {
    out << text;
    log << config.command << ": " << passed << "/" << rep.checks.size() << " checks passed\n";
  } else {
    const auto path = output_path(config);
    if (path.has_parent_path() && !std::filesystem::exists(path.parent_path())) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
      if (ec) throw ResourceError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    write_text(path, text);
    log << config.command << ": " << passed << "/" << rep.checks.size() << " checks passed -> " << path.string() << "\n";
  }
  for (const auto& c : rep.checks) {
    if (!c.pass) log << "  FAIL " << c.check_id << " metric=" << format_number(c.metric)
                     << " tolerance=" << format_number(c.tolerance) << "\n";
  }
  return rep.all_pass() ? kOk : kVerificationFailure;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"carlab: finite-mode verification of CAR quadratic estimates"};
  app.require_subcommand(1);
  RunConfig config;
  std::string modes = "4";
  std::string format = "json";
  bool no_header = false;

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"verify-car", "anticommutation relations, adjoints, projections and norms"},
      {"verify-bounds", "number-operator estimates for dGamma, Delta, Delta+ and the basic estimate"},
      {"verify-algebra", "commutator identity, adjoint relations and grading of the quadratics"},
      {"gaussian-check", "overlap series against the determinant formula, zeros and exponential order"},
      {"sweep-sharpness", "growth of sector norms for the decay families, Schatten recovery certificates"},
      {"report", "merge prior JSON/CSV outputs into one report"},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, config, modes, format, no_header);
    sub->callback([&config, name = std::string(e.name)] { config.command = name; });
    const std::string name = e.name;
    if (name == "verify-bounds") {
      sub->add_option("--which", config.which, "dGamma, Delta, DeltaPlus, basic, literature_dGamma, "
                                               "literature_Delta, literature_DeltaPlus, improved_r2");
      sub->add_option("--r", config.r_list, "exponents, comma separated: 1, 4/3, 1.5, 2, inf")->delimiter(',');
      sub->add_option("--diag", config.diag, "diagonal argument, comma separated")->delimiter(',');
      sub->add_option("--matrix-file", config.matrix_file, "JSON matrix of [re, im] pairs, row-major");
    } else if (name == "gaussian-check") {
      sub->add_option("--matrix-file", config.matrix_file, "skew C as a JSON matrix of [re, im] pairs");
      sub->add_option("--grid-radius", config.grid_radius, "z grid covers [-R, R]^2");
      sub->add_option("--grid-points", config.grid_points, "grid points per axis");
    } else if (name == "sweep-sharpness") {
      sub->add_option("--s", config.s, "decay exponent, 0 < s < 2");
      sub->add_option("--n-min", config.n_min, "smallest grid point");
      sub->add_option("--n-max", config.n_max, "largest grid point");
      sub->add_flag("--harmonic", config.harmonic, "use mu_j = 1/j instead of the power decay");
    } else if (name == "report") {
      sub->add_option("inputs", config.inputs, "files written by earlier runs")->required();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    config.modes = parse_mode_list(modes);
    config.format = format == "csv" ? Format::csv : Format::json;
    config.header = !no_header;
    return run(config, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kResourceError;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kResourceError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kResourceError;
  }
}

}  // namespace carlab::app
