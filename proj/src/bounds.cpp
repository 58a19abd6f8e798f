#include "carlab/bounds.hpp"

#include <array>
#include <charconv>
#include <functional>
#include <utility>

namespace carlab {

namespace {
constexpr std::array<std::pair<BoundKind, std::string_view>, 8> kNames{{
    {BoundKind::dGamma, "dGamma"},
    {BoundKind::Delta, "Delta"},
    {BoundKind::DeltaPlus, "DeltaPlus"},
    {BoundKind::basic, "basic"},
    {BoundKind::literature_dGamma, "literature_dGamma"},
    {BoundKind::literature_Delta, "literature_Delta"},
    {BoundKind::literature_DeltaPlus, "literature_DeltaPlus"},
    {BoundKind::improved_r2, "improved_r2"},
}};

double require_norm(const std::optional<double>& value, const char* what) {
  if (!value) throw ValidationError(std::string("bound needs the ") + what + " norm");
  if (!(*value >= 0)) throw ValidationError(std::string(what) + " norm must be nonnegative");
  return *value;
}

double parse_number(std::string_view text) {
  double value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ValidationError("cannot parse number '" + std::string(text) + "'");
  return value;
}
}  // namespace

std::string_view to_string(BoundKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ValidationError("unknown bound '" + std::string(name) + "'");
}

Quadratic quadratic_of(BoundKind kind) {
  switch (kind) {
    case BoundKind::Delta:
    case BoundKind::literature_Delta:
      return Quadratic::delta;
    case BoundKind::DeltaPlus:
    case BoundKind::literature_DeltaPlus:
    case BoundKind::improved_r2:
      return Quadratic::delta_plus;
    default:
      return Quadratic::d_gamma;
  }
}

BoundSpec make_bound_spec(BoundKind which, double r) {
  const std::string name(to_string(which));
  if (!(r >= 1)) throw ValidationError(name + ": exponent must be >= 1, got " + std::to_string(r));
  switch (which) {
    case BoundKind::Delta:
    case BoundKind::DeltaPlus:
      if (r > 2) throw ValidationError(name + ": admissible exponents are 1 <= r <= 2, got " + std::to_string(r));
      break;
    case BoundKind::literature_dGamma:
      if (!std::isinf(r)) throw ValidationError(name + " is stated for r = inf only");
      break;
    case BoundKind::literature_Delta:
    case BoundKind::literature_DeltaPlus:
    case BoundKind::improved_r2:
      if (r != 2) throw ValidationError(name + " is stated for r = 2 only");
      break;
    default:
      break;
  }
  return {which, r};
}

double parse_exponent(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInf;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_number(text.substr(0, slash));
    const double den = parse_number(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_number(text);
}

double norm_exponent(const BoundSpec& spec) {
  switch (spec.which) {
    case BoundKind::literature_dGamma: return kInf;
    case BoundKind::literature_Delta:
    case BoundKind::literature_DeltaPlus:
    case BoundKind::improved_r2: return 2.0;
    default: return spec.r;
  }
}

bool needs_hs_norm(const BoundSpec& spec) {
  switch (spec.which) {
    case BoundKind::dGamma: return spec.r > 1 && spec.r < 2;
    case BoundKind::Delta:
    case BoundKind::DeltaPlus: return spec.r > 1;
    default: return false;
  }
}

NormValues norm_values(const BoundSpec& spec, std::span<const double> singular_values) {
  NormValues out;
  out.r_norm = schatten_norm_of<double>(singular_values, norm_exponent(spec));
  if (needs_hs_norm(spec)) out.hs_norm = schatten_norm_of<double>(singular_values, 2.0);
  return out;
}

RhsForm rhs_form(const BoundSpec& spec, const NormValues& norms) {
  const double nr = require_norm(norms.r_norm, "r-th Schatten");
  const double s = spec.s();
  RhsForm f;
  switch (spec.which) {
    case BoundKind::dGamma:
      f.gamma = nr * nr;
      f.exponent = spec.r == 1 ? 0.0 : s;
      if (spec.r > 1 && spec.r < 2) {
        const double hs = require_norm(norms.hs_norm, "Hilbert-Schmidt");
        f.delta = hs * hs;
      }
      break;
    case BoundKind::Delta:
    case BoundKind::DeltaPlus:
      f.gamma = nr * nr;
      if (spec.r == 1) {
        f.exponent = 0.0;
      } else {
        const double hs = require_norm(norms.hs_norm, "Hilbert-Schmidt");
        f.exponent = s;
        f.delta = (spec.which == BoundKind::Delta ? 1.0 : 3.0) * hs * hs;
      }
      break;
    case BoundKind::basic:
      f.gamma = nr;
      f.exponent = s / 2;
      break;
    case BoundKind::literature_dGamma:
    case BoundKind::literature_Delta:
      f.gamma = nr * nr;
      f.exponent = 2.0;
      break;
    case BoundKind::literature_DeltaPlus:
      f.gamma = nr * nr;
      f.exponent = 2.0;
      f.offset = 2.0;
      break;
    case BoundKind::improved_r2:
      f.gamma = nr * nr;
      f.exponent = 1.0;
      f.delta = 2.0 * nr * nr;
      break;
  }
  return f;
}

BoundVerdict basic_estimate_check(std::span<const double> lambda, double p, double tolerance) {
  const BoundSpec spec = make_bound_spec(BoundKind::basic, p);
  for (double x : lambda) {
    if (!(x >= 0)) throw ValidationError("basic_estimate_check: weights must be nonnegative");
  }
  std::vector<double> sorted(lambda.begin(), lambda.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const RhsForm form = rhs_form(spec, norm_values(spec, sorted));
  const int m = static_cast<int>(sorted.size());
  if (tolerance < 0) tolerance = tol::kSpectral * (1 + detail::rhs_norm(form, m));
  double prefix = 0;
  double slack = form(0);
  for (int n = 1; n <= m; ++n) {
    prefix += sorted[static_cast<std::size_t>(n - 1)];
    slack = std::min(slack, form(n) - prefix);
  }
  return {"sum lambda_j a*_j a_j", "Lambda_p N^(1/q)", slack, tolerance, slack >= -tolerance};
}

}  // namespace carlab
