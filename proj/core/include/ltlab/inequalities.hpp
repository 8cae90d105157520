#pragma once

// Both sides of the eigenvalue inequalities for complex potentials:
// eigenvalue sums with cone filtering, the matrix-level tilted Hermitian
// comparison, single-eigenvalue bounds and the d = 1 bound
// |lambda| <= (1/4)(int |V|)^2, plus the eigenvalue exclusion raster.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltlab/constants.hpp"
#include "ltlab/discretize.hpp"
#include "ltlab/eigensolve.hpp"

namespace ltlab {

enum class Which { Thm1_i, Thm1_ii, Cor_i, Cor_ii, Lemma, Single_9, Single_10, Single_11, Davies2 };

/// Lower-case command-line name ("thm1_ii", "davies2", ...).
std::string to_string(Which which);
Which parse_which(const std::string& text);
bool is_sum_inequality(Which which);
bool is_single_inequality(Which which);

/// Default relative slack for checks on spectra of discretized PDEs.
inline constexpr double kContinuumSlack = 0.05;
/// The matrix-level comparison is exact up to rounding.
inline constexpr double kLemmaSlack = 1e-9;

struct InequalityRequest {
  Which which = Which::Thm1_i;
  double gamma = 1.0;
  std::optional<double> kappa;
  std::optional<double> alpha;
  bool refined = false;
  ConstantMode constant_mode = ConstantMode::sharp_known();
  double slack = kContinuumSlack;
  /// |p| kinetic: the potential exponent becomes gamma + d instead of gamma + d/2.
  Kinetic kinetic = Kinetic::Laplacian;
  /// Evaluate sum inequalities for gamma < 1 (outside the proven range);
  /// reports are then marked conjectural.
  bool allow_conjectural = false;

  /// Throws DomainError on an invalid flag combination for dimension `dim`.
  void validate(int dim) const;
  /// Exponent of |V| on the right-hand side.
  double potential_exponent(int dim) const;
};

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs/rhs; 0 when both vanish, +inf when rhs = 0 < lhs.
  double ratio = 0.0;
  std::vector<cplx> eigenvalues_used;
  ConstantValue constant;
  InequalityRequest request;
  bool satisfied = true;
  double slack = 0.0;
  /// rhs = 0 < lhs; only happens for degenerate inputs such as V = 0.
  bool vacuous_violation = false;
  /// gamma outside the range covered by the theorems.
  bool conjectural = false;

  nlohmann::json to_json() const;
};

enum class ConeSide { OutsideCone, InsideCone };

/// OutsideCone: |Im z| >= kappa Re z. InsideCone: |Im z| <= -kappa Re z.
std::vector<cplx> cone_select(std::span<const cplx> eigs, double kappa, ConeSide side);

/// sum over all eigenvalues of M of (Re z + alpha Im z)_-^gamma against
/// Tr(K + Re V + alpha Im V)_-^gamma.
InequalityReport lemma_check(const OperatorMatrix& m, double alpha, double gamma);
InequalityReport lemma_check(const OperatorMatrix& m, const ComplexSpectrum& spectrum, double alpha, double gamma);

/// Thm1_i, Thm1_ii, Cor_i, Cor_ii on the kept eigenvalues of a filtered spectrum.
InequalityReport check_sum(const InequalityRequest& request, const FilteredSpectrum& spectrum,
                           const SampledPotential& v, const ConstantTable& table = {});

/// Single_9, Single_10, Single_11, Davies2 for one eigenvalue mu.
InequalityReport check_single(cplx mu, const InequalityRequest& request, const SampledPotential& v,
                              const ConstantTable& table = {});

/// True iff the single-eigenvalue request's preconditions hold at mu.
bool single_applies(Which which, cplx mu, int dim);

/// Complex-plane window, real axis first.
struct Window {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
};

struct Resolution {
  int nx = 100;
  int ny = 100;
};

struct ExclusionRaster {
  static constexpr int kMaxResolution = 4096;

  Window window;
  Resolution resolution;
  /// mask[iy * nx + ix]; iy = 0 is the bottom row (smallest Im).
  std::vector<std::uint8_t> mask;
  int dim = 1;
  double gamma = 1.0;
  ConstantMode mode;
  bool include_davies = false;
  /// Potential norms that enter the bounds.
  double int_abs = 0.0;       // int |V|^{gamma + d/2}
  double int_re_neg = 0.0;    // int (Re V)_-^{gamma + d/2}
  double int_abs_one = 0.0;   // int |V|
  double single_constant = 0.0;
  double one_bound_constant = 0.0;

  bool excluded(int ix, int iy) const { return mask[static_cast<std::size_t>(iy) * resolution.nx + ix] != 0; }
  cplx pixel_center(int ix, int iy) const;
  /// Pixel containing z, or nullopt if z lies outside the window.
  std::optional<std::pair<int, int>> locate(cplx z) const;

  /// Binary PGM (P5), top row = largest Im, 255 = excluded.
  std::string to_pgm() const;
  nlohmann::json sidecar() const;
};

/// Marks mu excluded iff some applicable single-eigenvalue bound fails at mu.
/// Points of [0, inf) are never excluded.
bool excluded_point(cplx mu, const ExclusionRaster& norms);

ExclusionRaster exclusion_region(const SampledPotential& v, double gamma, const ConstantMode& mode,
                                 const Window& window, const Resolution& resolution, bool include_davies,
                                 const ConstantTable& table = {});

/// Elementary bounds sqrt(a^2 + b^2) <= a + b <= sqrt 2 sqrt(a^2 + b^2), a, b >= 0.
bool elementary_inequality_holds(double a, double b);

}  // namespace ltlab
