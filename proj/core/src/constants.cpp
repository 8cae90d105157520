#include "ltlab/constants.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(b)); }

std::string fmt_gamma(double gamma, int dim) {
  std::ostringstream os;
  os << "gamma = " << gamma << ", d = " << dim;
  return os.str();
}

// Scaled(2) dominates L_{g,1} for every g >= 1/2: the ratio L_{g,1}/L^cl_{g,1}
// equals 2 at g = 1/2 and does not increase with g.
bool builtin_scaled_guarantee(double factor, double gamma, int dim) {
  return dim == 1 && gamma >= 0.5 && factor >= ConstantMode::kDefaultScaledFactor;
}

bool scaled_guaranteed(const ConstantMode& mode, double gamma, int dim,
                       const ConstantTable& table) {
  if (builtin_scaled_guarantee(mode.factor, gamma, dim)) return true;
  const bool documented = mode.provenance.has_value() || table.scaled_factor_provenance.has_value();
  return documented && mode.factor >= 1.0;
}

ConstantValue make(double value, double gamma, int dim, const ConstantMode& mode, bool guaranteed) {
  return ConstantValue{value, gamma, dim, mode, guaranteed};
}

ConstantValue scale(ConstantValue base, double factor) {
  base.value *= factor;
  return base;
}

void require_gamma_at_least_one(double gamma) {
  if (!(gamma >= 1.0)) {
    throw DomainError("eigenvalue-sum bounds require gamma >= 1 (got " + std::to_string(gamma) + ")");
  }
}

void require_positive_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("cone aperture kappa must be positive and finite (got " + std::to_string(kappa) + ")");
  }
}

// Gamma(n) for a positive integer argument n.
double factorial_like(double n) {
  double value = 1.0;
  for (double k = 2.0; k < n; k += 1.0) value *= k;
  return value;
}

// Gamma(x) / sqrt(pi) for x = m + 1/2, m >= 0.
double half_integer_gamma_over_sqrt_pi(double x) {
  double value = 1.0;
  for (double k = 0.5; k < x - 0.25; k += 1.0) value *= k;
  return value;
}

}  // namespace

ConstantMode ConstantMode::scaled(double factor, std::optional<std::string> provenance) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DomainError("Scaled constant mode needs a positive factor");
  }
  return {ConstantTag::Scaled, factor, std::move(provenance)};
}

std::string ConstantMode::name() const {
  switch (tag) {
    case ConstantTag::Classical: return "classical";
    case ConstantTag::SharpKnown: return "sharp";
    case ConstantTag::Unit: return "unit";
    case ConstantTag::Scaled: {
      std::ostringstream os;
      os << "scaled:" << factor;
      return os.str();
    }
  }
  return "unknown";
}

ConstantMode ConstantMode::parse(const std::string& text) {
  if (text == "classical") return classical();
  if (text == "sharp" || text == "sharp_known") return sharp_known();
  if (text == "unit") return unit();
  if (text == "scaled") return scaled();
  if (text.rfind("scaled:", 0) == 0) {
    const std::string number = text.substr(7);
    std::size_t used = 0;
    double factor = 0.0;
    try {
      factor = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) throw DomainError("bad scaled factor in constant mode '" + text + "'");
    return scaled(factor);
  }
  throw DomainError("unknown constant mode '" + text + "' (expected classical|sharp|unit|scaled[:f])");
}

ConstantTable ConstantTable::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("constants file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("constants file: top level must be an object");
  ConstantTable table;
  for (const auto& [key, value] : doc.items()) {
    if (key == "scaled_factor_provenance") {
      if (!value.is_string()) throw FormatError("constants file: scaled_factor_provenance must be a string");
      table.scaled_factor_provenance = value.get<std::string>();
      continue;
    }
    int dim = 0;
    char tail[16] = {};
    if (std::sscanf(key.c_str(), "clr_d%d_gamma%15s", &dim, tail) == 2 && std::string(tail) == "0") {
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw FormatError("constants file: " + key + " must be a positive number");
      }
      if (dim < 3) throw FormatError("constants file: " + key + " requires d >= 3");
      table.clr_gamma0[dim] = value.get<double>();
      continue;
    }
    throw FormatError("constants file: unknown key '" + key + "'");
  }
  return table;
}

ConstantTable ConstantTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open constants file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

bool is_admissible(double gamma, int dim) noexcept {
  if (dim < 1 || !std::isfinite(gamma)) return false;
  if (dim == 1) return gamma >= 0.5;
  if (dim == 2) return gamma > 0.0;
  return gamma >= 0.0;
}

void require_admissible(double gamma, int dim) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  if (is_admissible(gamma, dim)) return;
  const char* condition = dim == 1 ? "gamma >= 1/2 if d = 1" : dim == 2 ? "gamma > 0 if d = 2" : "gamma >= 0 if d >= 3";
  throw DomainError("inadmissible " + fmt_gamma(gamma, dim) + ": requires " + condition);
}

double classical_constant(double gamma, int dim) {
  require_admissible(gamma, dim);
  const double four_pi = 4.0 * std::numbers::pi;
  if (dim % 2 == 0) {
    double value = 1.0;
    for (int j = 1; j <= dim / 2; ++j) value /= (gamma + j) * four_pi;
    return value;
  }
  // Odd d with integer or half-integer gamma: one Gamma factor carries sqrt(pi),
  // which cancels against (4 pi)^{d/2} before any rounding happens.
  const double twice = 2.0 * gamma;
  if (twice == std::round(twice) && gamma <= 60.0) {
    const double shifted = gamma + 0.5 * dim;  // Gamma(shifted + 1) in the denominator
    const bool gamma_integer = gamma == std::round(gamma);
    const double numer = gamma_integer ? factorial_like(gamma + 1.0) : half_integer_gamma_over_sqrt_pi(gamma + 1.0);
    const double denom = gamma_integer ? half_integer_gamma_over_sqrt_pi(shifted + 1.0) : factorial_like(shifted + 1.0);
    const int pi_power = gamma_integer ? (dim + 1) / 2 : (dim - 1) / 2;
    return numer / denom / std::exp2(dim) / std::pow(std::numbers::pi, pi_power);
  }
  const double half_d = 0.5 * dim;
  return std::exp(std::lgamma(gamma + 1.0) - std::lgamma(gamma + half_d + 1.0) - half_d * std::log(four_pi));
}

ConstantValue lt_constant(double gamma, int dim, const ConstantMode& mode, const ConstantTable& table) {
  require_admissible(gamma, dim);
  switch (mode.tag) {
    case ConstantTag::Unit:
      return make(1.0, gamma, dim, mode, false);
    case ConstantTag::Classical:
      return make(classical_constant(gamma, dim), gamma, dim, mode, gamma >= 1.5);
    case ConstantTag::Scaled:
      return make(mode.factor * classical_constant(gamma, dim), gamma, dim, mode,
                  scaled_guaranteed(mode, gamma, dim, table));
    case ConstantTag::SharpKnown:
      if (gamma >= 1.5) return make(classical_constant(gamma, dim), gamma, dim, mode, true);
      if (dim == 1 && near(gamma, 0.5)) return make(0.5, gamma, dim, mode, true);
      throw DomainError("sharp constant unknown for L_{gamma,d} at " + fmt_gamma(gamma, dim) +
                        " (known only for gamma >= 3/2, or gamma = 1/2 in d = 1)");
  }
  throw DomainError("unhandled constant mode");
}

ConstantValue one_bound_constant(double gamma, int dim, const ConstantMode& mode, const ConstantTable& table) {
  require_admissible(gamma, dim);
  switch (mode.tag) {
    case ConstantTag::Unit:
      return make(1.0, gamma, dim, mode, false);
    case ConstantTag::Classical:
      // classical <= L and L^1 <= L say nothing about classical vs L^1.
      return make(classical_constant(gamma, dim), gamma, dim, mode, false);
    case ConstantTag::Scaled:
      return make(mode.factor * classical_constant(gamma, dim), gamma, dim, mode,
                  scaled_guaranteed(mode, gamma, dim, table));
    case ConstantTag::SharpKnown:
      if (dim == 1 && near(gamma, 0.5)) return make(0.5, gamma, dim, mode, true);
      if (dim >= 3 && gamma == 0.0) {
        const auto it = table.clr_gamma0.find(dim);
        if (it == table.clr_gamma0.end()) {
          throw DomainError("sharp constant unknown for L^1_{0," + std::to_string(dim) +
                            "}: supply clr_d" + std::to_string(dim) + "_gamma0 in a constants file");
        }
        return make(it->second, gamma, dim, mode, true);
      }
      throw DomainError("sharp constant unknown for L^1_{gamma,d} at " + fmt_gamma(gamma, dim));
  }
  throw DomainError("unhandled constant mode");
}

ConstantValue cone_constant(double gamma, int dim, double kappa, const ConstantMode& mode,
                            const ConstantTable& table) {
  require_gamma_at_least_one(gamma);
  require_positive_kappa(kappa);
  const double p = gamma + 0.5 * dim;
  const double factor = std::exp2(1.0 + 0.5 * gamma + 0.25 * dim) * std::pow(1.0 + 2.0 / kappa, p);
  return scale(lt_constant(gamma, dim, mode, table), factor);
}

CorollaryConstants corollary_constants(double gamma, int dim, double kappa, const ConstantMode& mode,
                                       const ConstantTable& table) {
  require_gamma_at_least_one(gamma);
  require_positive_kappa(kappa);
  const ConstantValue base = lt_constant(gamma, dim, mode, table);
  return {scale(base, std::exp2(1.0 + 0.5 * gamma + 0.25 * dim)), scale(base, 1.0 + kappa)};
}

ConstantValue single_ev_constant(double gamma, int dim, const ConstantMode& mode, const ConstantTable& table) {
  return scale(one_bound_constant(gamma, dim, mode, table), std::exp2(0.5 * gamma + 0.25 * dim));
}

double riesz_lift_constant(double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw DomainError("riesz_lift_constant requires gamma > 1 (the lifting integral diverges otherwise)");
  }
  return 1.0 / (gamma * (gamma - 1.0));
}

}  // namespace ltlab
