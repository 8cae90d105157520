#pragma once

// Derivative-free search for potentials that push an inequality's
// lhs/rhs ratio towards 1: Nelder-Mead with seeded restarts over small
// parametrized potential families.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltlab/constants.hpp"
#include "ltlab/discretize.hpp"
#include "ltlab/eigensolve.hpp"
#include "ltlab/inequalities.hpp"

namespace ltlab {

enum class FamilyKind { GaussianSum, BoxSum, DeltaLike };

struct ParamBound {
  double lo = 0.0;
  double hi = 1.0;
};

/// GaussianSum / BoxSum: per term (amp_re, amp_im, center[dim], log width[dim]).
/// DeltaLike: a single box of fixed total strength at the origin; the one
/// parameter is log of its half-width.
struct FamilySpec {
  FamilyKind kind = FamilyKind::GaussianSum;
  int terms = 1;
  int dim = 1;
  cplx strength{4.0, 0.0};  // DeltaLike only
  std::vector<ParamBound> bounds;

  std::size_t arity() const;
  /// Throws DomainError on an arity mismatch or non-finite / inverted bounds.
  void validate() const;
  PotentialSpec potential(std::span<const double> theta) const;

  /// Bounds used when none are given.
  static std::vector<ParamBound> default_bounds(FamilyKind kind, int terms, int dim);
  static FamilySpec delta(cplx strength, double w_min = 0.01, double w_max = 0.5);

  nlohmann::json to_json() const;
  static FamilySpec from_json(const nlohmann::json& j);
};

std::string to_string(FamilyKind kind);

/// Everything between a potential and its filtered spectrum.
struct Pipeline {
  GridSpec grid;
  /// Stability check on: box-continuum modes of complex potentials sit off
  /// the half-line and would otherwise pose as violations.
  FilterPolicy filter = [] {
    FilterPolicy p;
    p.stability_check = true;
    return p;
  }();
  Sampling sampling = Sampling::CellAverage;
  Kinetic kinetic = Kinetic::Laplacian;
  ConstantTable table;
};

struct ObjectiveValue {
  /// Penalized ratio; -1 when the pipeline failed.
  double value = 0.0;
  std::string diagnostic;
};

/// Out-of-bounds coordinates are clamped and the ratio reduced by
/// 10 * sum(overshoot / bound width)^2.
ObjectiveValue objective_ratio(std::span<const double> theta, const FamilySpec& family,
                               const InequalityRequest& request, const Pipeline& pipeline);

struct OptimizerConfig {
  int restarts = 5;
  int max_evals = 200;  // per restart
  std::uint64_t seed = 42;
  /// Initial simplex edge as a fraction of each bound width.
  double init_scale = 0.1;
  double rel_tol = 1e-10;
  /// In units of the bound widths.
  double simplex_tol = 1e-8;
  Pipeline pipeline;
};

struct RestartResult {
  int index = 0;
  std::vector<double> start;
  std::vector<double> best_params;
  double best_ratio = 0.0;
  int evals = 0;
  /// Objective value per evaluation, in evaluation order.
  std::vector<double> history;
  /// Running maximum of `history`.
  std::vector<double> best_history;
  std::vector<std::string> diagnostics;
};

struct OptResult {
  std::vector<double> best_params;
  double best_ratio = 0.0;
  int best_restart = 0;
  int eval_count = 0;
  std::vector<RestartResult> restarts;
  std::uint64_t seed = 0;
  Which which = Which::Davies2;
  double gamma = 1.0;
  bool conjectural = false;

  nlohmann::json to_json() const;
};

/// Counter-based generator: the k-th draw of stream (seed, stream) in [0, 1).
double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

/// Restarts run concurrently (LTLAB_THREADS); the result does not depend on
/// the thread count.
OptResult maximize_ratio(const FamilySpec& family, const InequalityRequest& request, const OptimizerConfig& config);

struct SweepEntry {
  double gamma = 0.0;
  /// Outside the range covered by the theorems; no verdict is attached.
  bool conjectural = false;
  std::optional<OptResult> result;
  /// Set when the entry was rejected (result empty).
  std::string error;

  nlohmann::json to_json() const;
};

/// True iff a ratio above 1 + slack for this request would contradict a
/// proven bound: gamma in the proven range, a guaranteed constant and the
/// Laplacian kinetic term.
bool theorem_covers(const InequalityRequest& request, int dim, const ConstantTable& table = {});

std::vector<SweepEntry> gamma_sweep(const FamilySpec& family, std::span<const double> gammas,
                                    const InequalityRequest& request_template, const OptimizerConfig& config);

}  // namespace ltlab
