#pragma once

// Lieb-Thirring type constants: the semiclassical constant, the sum and
// one-bound-state constants under several modes, and the constants derived
// from them for cone-filtered and single-eigenvalue bounds.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace ltlab {

enum class ConstantTag { Classical, SharpKnown, Scaled, Unit };

struct ConstantMode {
  ConstantTag tag = ConstantTag::Classical;
  /// Multiplier of the classical constant; only meaningful for Scaled.
  double factor = 1.0;
  /// Caller's justification that `factor` times the classical constant
  /// dominates the true constant. Without it a Scaled constant is reported
  /// unguaranteed (except the built-in factor 2 in d = 1).
  std::optional<std::string> provenance;

  static ConstantMode classical() { return {ConstantTag::Classical, 1.0, {}}; }
  static ConstantMode sharp_known() { return {ConstantTag::SharpKnown, 1.0, {}}; }
  static ConstantMode unit() { return {ConstantTag::Unit, 1.0, {}}; }
  static ConstantMode scaled(double factor = kDefaultScaledFactor,
                             std::optional<std::string> provenance = {});

  /// "classical", "sharp", "unit" or "scaled:<factor>".
  std::string name() const;
  static ConstantMode parse(const std::string& text);

  static constexpr double kDefaultScaledFactor = 2.0;
};

struct ConstantValue {
  double value = 0.0;
  double gamma = 0.0;
  int dim = 1;
  ConstantMode mode;
  /// True iff `value` is a proven upper bound for the true constant.
  bool guaranteed = false;
};

/// Externally supplied constants (sharp values the library does not encode).
/// JSON layout: {"clr_d3_gamma0": value, "scaled_factor_provenance": "..."}.
/// Any key of the form "clr_d<d>_gamma0" is accepted.
struct ConstantTable {
  std::map<int, double> clr_gamma0;  // keyed by dimension
  std::optional<std::string> scaled_factor_provenance;

  static ConstantTable from_json_text(const std::string& text);
  static ConstantTable load(const std::filesystem::path& path);
};

/// Throws DomainError unless gamma >= 1/2 (d = 1), gamma > 0 (d = 2),
/// gamma >= 0 (d >= 3).
void require_admissible(double gamma, int dim);
bool is_admissible(double gamma, int dim) noexcept;

/// Gamma(g + 1) / (4 pi)^{d/2} / Gamma(g + d/2 + 1).
double classical_constant(double gamma, int dim);

ConstantValue lt_constant(double gamma, int dim, const ConstantMode& mode,
                          const ConstantTable& table = {});
ConstantValue one_bound_constant(double gamma, int dim, const ConstantMode& mode,
                                 const ConstantTable& table = {});

/// 2^{1 + g/2 + d/4} (1 + 2/kappa)^{g + d/2} L_{g,d}.
ConstantValue cone_constant(double gamma, int dim, double kappa,
                            const ConstantMode& mode,
                            const ConstantTable& table = {});

struct CorollaryConstants {
  ConstantValue eigenvalue_sum;  // 2^{1 + g/2 + d/4} L_{g,d}
  ConstantValue inside_cone;     // (1 + kappa) L_{g,d}
};

CorollaryConstants corollary_constants(double gamma, int dim, double kappa,
                                       const ConstantMode& mode,
                                       const ConstantTable& table = {});

/// 2^{g/2 + d/4} L^1_{g,d}.
ConstantValue single_ev_constant(double gamma, int dim, const ConstantMode& mode,
                                 const ConstantTable& table = {});

/// C_g with C_g s_-^g = int_0^inf t^{g-2} (s + t)_- dt, i.e. 1/(g (g - 1)).
double riesz_lift_constant(double gamma);

}  // namespace ltlab
