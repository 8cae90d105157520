#include "ltlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ltlab/error.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/serialize.hpp"

namespace ltlab {
namespace {

using nlohmann::json;

constexpr double kPenaltyWeight = 10.0;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t params_per_term(int dim) { return 2 + 2 * static_cast<std::size_t>(dim); }

double width_of(const ParamBound& b) { return b.hi - b.lo; }

ObjectiveValue evaluate_clamped(std::span<const double> theta, const FamilySpec& family,
                                const InequalityRequest& request, const Pipeline& pipeline) {
  const PotentialSpec spec = family.potential(theta);
  const SampledPotential v = sample_potential(spec, pipeline.grid, pipeline.sampling);
  const OperatorMatrix op = build_operator(pipeline.grid, v, pipeline.kinetic);

  if (request.which == Which::Lemma) {
    return {lemma_check(op, request.alpha.value_or(0.0), request.gamma).ratio, {}};
  }
  OperatorFactory rebuild;
  if (pipeline.filter.stability_check) {
    rebuild = [&](const GridSpec& g) {
      return build_operator(g, sample_potential(spec, g, pipeline.sampling), pipeline.kinetic);
    };
  }
  const FilteredSpectrum filtered = solve_and_filter(op, pipeline.filter, rebuild);
  if (filtered.kept.empty()) return {0.0, {}};

  if (is_sum_inequality(request.which)) return {check_sum(request, filtered, v, pipeline.table).ratio, {}};

  double best = 0.0;
  for (const cplx mu : filtered.kept) {
    if (!single_applies(request.which, mu, pipeline.grid.dim)) continue;
    best = std::max(best, check_single(mu, request, v, pipeline.table).ratio);
  }
  return {best, {}};
}

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::GaussianSum: return "gaussian_sum";
    case FamilyKind::BoxSum: return "box_sum";
    case FamilyKind::DeltaLike: return "delta_like";
  }
  return "unknown";
}

std::size_t FamilySpec::arity() const {
  if (kind == FamilyKind::DeltaLike) return 1;
  return static_cast<std::size_t>(terms) * params_per_term(dim);
}

void FamilySpec::validate() const {
  if (dim < 1 || dim > 3) throw DomainError("family dim must be 1, 2 or 3");
  if (kind == FamilyKind::DeltaLike && dim != 1) throw DomainError("delta_like family is one-dimensional");
  if (kind != FamilyKind::DeltaLike && terms < 1) throw DomainError("family needs at least one term");
  if (bounds.size() != arity()) {
    throw DomainError("family has " + std::to_string(bounds.size()) + " bounds, expected " + std::to_string(arity()));
  }
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
      throw DomainError("family bounds must be finite with lo <= hi");
    }
  }
}

PotentialSpec FamilySpec::potential(std::span<const double> theta) const {
  if (theta.size() != arity()) throw DomainError("parameter vector has the wrong length for this family");
  if (kind == FamilyKind::DeltaLike) return delta_like(strength, std::exp(theta[0]));
  PotentialSpec spec;
  spec.dim = dim;
  const std::size_t stride = params_per_term(dim);
  for (int t = 0; t < terms; ++t) {
    const double* p = theta.data() + static_cast<std::size_t>(t) * stride;
    const cplx amp{p[0], p[1]};
    std::vector<double> center(p + 2, p + 2 + dim);
    std::vector<double> width(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) width[static_cast<std::size_t>(i)] = std::exp(p[2 + dim + i]);
    spec.terms.push_back(kind == FamilyKind::GaussianSum ? PotentialTerm::gaussian(amp, center, width)
                                                         : PotentialTerm::box(amp, center, width));
  }
  return spec;
}

std::vector<ParamBound> FamilySpec::default_bounds(FamilyKind kind, int terms, int dim) {
  if (kind == FamilyKind::DeltaLike) return {{std::log(0.01), std::log(0.5)}};
  std::vector<ParamBound> out;
  for (int t = 0; t < terms; ++t) {
    out.push_back({-10.0, 10.0});
    out.push_back({-10.0, 10.0});
    for (int i = 0; i < dim; ++i) out.push_back({-2.0, 2.0});
    for (int i = 0; i < dim; ++i) out.push_back({std::log(0.1), std::log(2.0)});
  }
  return out;
}

FamilySpec FamilySpec::delta(cplx strength, double w_min, double w_max) {
  FamilySpec f;
  f.kind = FamilyKind::DeltaLike;
  f.strength = strength;
  f.bounds = {{std::log(w_min), std::log(w_max)}};
  return f;
}

json FamilySpec::to_json() const {
  json b = json::array();
  for (const auto& x : bounds) b.push_back({x.lo, x.hi});
  json j = {{"kind", ltlab::to_string(kind)}, {"terms", terms}, {"dim", dim}, {"bounds", b}};
  if (kind == FamilyKind::DeltaLike) j["strength"] = {strength.real(), strength.imag()};
  return j;
}

FamilySpec FamilySpec::from_json(const json& j) {
  try {
    FamilySpec f;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "gaussian_sum") {
      f.kind = FamilyKind::GaussianSum;
    } else if (kind == "box_sum") {
      f.kind = FamilyKind::BoxSum;
    } else if (kind == "delta_like") {
      f.kind = FamilyKind::DeltaLike;
    } else {
      throw FormatError("unknown family kind \"" + kind + "\"");
    }
    f.terms = j.value("terms", 1);
    f.dim = j.value("dim", 1);
    if (j.contains("strength")) {
      const auto s = j.at("strength").get<std::vector<double>>();
      if (s.size() != 2) throw FormatError("\"strength\" must be [re, im]");
      f.strength = {s[0], s[1]};
    }
    if (j.contains("bounds")) {
      for (const auto& b : j.at("bounds")) {
        const auto v = b.get<std::vector<double>>();
        if (v.size() != 2) throw FormatError("each bound must be [lo, hi]");
        f.bounds.push_back({v[0], v[1]});
      }
    } else {
      f.bounds = default_bounds(f.kind, f.terms, f.dim);
    }
    f.validate();
    return f;
  } catch (const json::exception& e) {
    throw FormatError(std::string("family: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("family: ") + e.what());
  }
}

ObjectiveValue objective_ratio(std::span<const double> theta, const FamilySpec& family,
                               const InequalityRequest& request, const Pipeline& pipeline) {
  if (theta.size() != family.arity()) throw DomainError("parameter vector has the wrong length for this family");
  std::vector<double> clamped(theta.begin(), theta.end());
  double penalty = 0.0;
  for (std::size_t i = 0; i < clamped.size(); ++i) {
    const ParamBound& b = family.bounds[i];
    const double c = std::clamp(clamped[i], b.lo, b.hi);
    const double w = width_of(b);
    if (c != clamped[i] && w > 0.0) {
      const double over = (clamped[i] - c) / w;
      penalty += over * over;
    }
    clamped[i] = c;
  }
  try {
    ObjectiveValue v = evaluate_clamped(clamped, family, request, pipeline);
    v.value -= kPenaltyWeight * penalty;
    return v;
  } catch (const std::exception& e) {
    return {-1.0, e.what()};
  }
}

double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(stream + 1));
  const std::uint64_t bits = splitmix64(key + (k + 1) * 0x9E3779B97F4A7C15ULL);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

namespace {

RestartResult run_restart(int index, const FamilySpec& family, const InequalityRequest& request,
                          const OptimizerConfig& config) {
  const std::size_t n = family.arity();
  RestartResult out;
  out.index = index;
  out.start.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ParamBound& b = family.bounds[i];
    out.start[i] = b.lo + uniform_draw(config.seed, static_cast<std::uint64_t>(index), i) * width_of(b);
  }

  auto eval = [&](const std::vector<double>& x) {
    const ObjectiveValue v = objective_ratio(x, family, request, config.pipeline);
    ++out.evals;
    out.history.push_back(v.value);
    if (!v.diagnostic.empty()) out.diagnostics.push_back("eval " + std::to_string(out.evals) + ": " + v.diagnostic);
    if (out.best_params.empty() || v.value > out.best_ratio) {
      out.best_ratio = v.value;
      out.best_params = x;
    }
    out.best_history.push_back(out.best_ratio);
    return v.value;
  };
  auto budget_left = [&] { return out.evals < config.max_evals; };

  // Simplex is kept sorted best (largest objective) first.
  Simplex s;
  s.x.push_back(out.start);
  s.f.push_back(eval(out.start));
  for (std::size_t i = 0; i < n && budget_left(); ++i) {
    std::vector<double> v = out.start;
    const ParamBound& b = family.bounds[i];
    const double step = config.init_scale * width_of(b);
    v[i] = v[i] + step <= b.hi ? v[i] + step : v[i] - step;
    s.x.push_back(v);
    s.f.push_back(eval(v));
  }
  if (s.x.size() < n + 1) return out;

  auto order = [&] {
    std::vector<std::size_t> idx(s.x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.f[a] > s.f[b]; });
    Simplex sorted;
    for (std::size_t i : idx) {
      sorted.x.push_back(s.x[i]);
      sorted.f.push_back(s.f[i]);
    }
    s = std::move(sorted);
  };
  auto size = [&] {
    double worst = 0.0;
    for (std::size_t k = 1; k < s.x.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double w = width_of(family.bounds[i]);
        const double d = std::abs(s.x[k][i] - s.x[0][i]);
        worst = std::max(worst, w > 0.0 ? d / w : d);
      }
    }
    return worst;
  };
  auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  order();
  while (budget_left()) {
    const double spread = std::abs(s.f.front() - s.f.back());
    if (spread <= config.rel_tol * (std::abs(s.f.front()) + 1e-300) || size() <= config.simplex_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s.x[k][i] / static_cast<double>(n);
    }
    const std::vector<double> reflected = blend(centroid, s.x[n], -1.0);
    const double fr = eval(reflected);
    if (fr > s.f[0]) {
      if (!budget_left()) {
        s.x[n] = reflected;
        s.f[n] = fr;
        break;
      }
      const std::vector<double> expanded = blend(centroid, s.x[n], -2.0);
      const double fe = eval(expanded);
      if (fe > fr) {
        s.x[n] = expanded;
        s.f[n] = fe;
      } else {
        s.x[n] = reflected;
        s.f[n] = fr;
      }
    } else if (fr > s.f[n - 1]) {
      s.x[n] = reflected;
      s.f[n] = fr;
    } else {
      if (!budget_left()) break;
      const bool outside = fr > s.f[n];
      const std::vector<double> contracted = outside ? blend(centroid, reflected, 0.5) : blend(centroid, s.x[n], 0.5);
      const double fc = eval(contracted);
      if (fc > (outside ? fr : s.f[n])) {
        s.x[n] = contracted;
        s.f[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n && budget_left(); ++k) {
          s.x[k] = blend(s.x[0], s.x[k], 0.5);
          s.f[k] = eval(s.x[k]);
        }
      }
    }
    order();
  }
  return out;
}

json restart_json(const RestartResult& r) {
  json history = json::array();
  for (double v : r.history) history.push_back(finite_or_null(v));
  return {{"restart", r.index},
          {"start", r.start},
          {"best_params", r.best_params},
          {"best_ratio", finite_or_null(r.best_ratio)},
          {"evals", r.evals},
          {"history", history},
          {"diagnostics", r.diagnostics}};
}

}  // namespace

OptResult maximize_ratio(const FamilySpec& family, const InequalityRequest& request, const OptimizerConfig& config) {
  family.validate();
  config.pipeline.grid.validate();
  request.validate(config.pipeline.grid.dim);
  if (family.dim != config.pipeline.grid.dim) throw DomainError("family and grid dimensions differ");
  if (config.restarts < 1) throw DomainError("optimizer needs at least one restart");
  if (config.max_evals < 1) throw DomainError("optimizer needs a positive evaluation budget");

  std::vector<RestartResult> runs(static_cast<std::size_t>(config.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r] = run_restart(static_cast<int>(r), family, request, config);
  });

  OptResult out;
  out.seed = config.seed;
  out.which = request.which;
  out.gamma = request.gamma;
  out.conjectural = is_sum_inequality(request.which) && request.gamma < 1.0;
  out.best_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& r : runs) {
    out.eval_count += r.evals;
    // Strict comparison: ties go to the lowest restart index.
    if (r.best_ratio > out.best_ratio || out.best_params.empty()) {
      out.best_ratio = r.best_ratio;
      out.best_params = r.best_params;
      out.best_restart = r.index;
    }
  }
  out.restarts = std::move(runs);
  return out;
}

json OptResult::to_json() const {
  json restarts_json = json::array();
  for (const auto& r : restarts) restarts_json.push_back(restart_json(r));
  return {{"best_ratio", finite_or_null(best_ratio)},
          {"best_params", best_params},
          {"best_restart", best_restart},
          {"eval_count", eval_count},
          {"gamma", gamma},
          {"which", ltlab::to_string(which)},
          {"conjectural", conjectural},
          {"seed", seed},
          {"restarts", restarts_json}};
}

json SweepEntry::to_json() const {
  json j = {{"gamma", gamma}, {"conjectural", conjectural}};
  if (result) {
    j["best_ratio"] = finite_or_null(result->best_ratio);
    j["best_params"] = result->best_params;
    j["result"] = result->to_json();
  } else {
    j["error"] = error;
  }
  return j;
}

bool theorem_covers(const InequalityRequest& request, int dim, const ConstantTable& table) {
  if (request.which == Which::Lemma) return request.gamma >= 1.0;
  if (request.kinetic != Kinetic::Laplacian) return false;
  try {
    switch (request.which) {
      case Which::Davies2: return dim == 1;
      case Which::Single_9: return one_bound_constant(request.gamma, dim, request.constant_mode, table).guaranteed;
      case Which::Single_10:
      case Which::Single_11: return single_ev_constant(request.gamma, dim, request.constant_mode, table).guaranteed;
      default:
        return request.gamma >= 1.0 && lt_constant(request.gamma, dim, request.constant_mode, table).guaranteed;
    }
  } catch (const DomainError&) {
    return false;
  }
}

std::vector<SweepEntry> gamma_sweep(const FamilySpec& family, std::span<const double> gammas,
                                    const InequalityRequest& request_template, const OptimizerConfig& config) {
  std::vector<SweepEntry> table;
  for (const double g : gammas) {
    SweepEntry entry;
    entry.gamma = g;
    entry.conjectural = g < 1.0;
    try {
      require_admissible(g, config.pipeline.grid.dim);
      InequalityRequest request = request_template;
      request.gamma = g;
      if (entry.conjectural) request.allow_conjectural = true;
      entry.result = maximize_ratio(family, request, config);
    } catch (const DomainError& e) {
      entry.error = e.what();
    }
    table.push_back(std::move(entry));
  }
  return table;
}

}  // namespace ltlab
