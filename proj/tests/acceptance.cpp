// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "ltlab/constants.hpp"
#include "ltlab/corpus.hpp"
#include "ltlab/discretize.hpp"
#include "ltlab/eigensolve.hpp"
#include "ltlab/inequalities.hpp"
#include "ltlab/optimizer.hpp"
#include "ltlab/oracles.hpp"
#include "support.hpp"

namespace {

using namespace ltlab;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates sub-checks; the first failures are kept for the report line.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }

  Outcome outcome() const {
    std::string d = info_;
    if (failures_ > 0) {
      d += (d.empty() ? "" : " | ") + std::to_string(failures_) + " failed: " + notes_;
    }
    return {failures_ == 0, d};
  }

 private:
  int failures_ = 0;
  std::string notes_;
  std::string info_;
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string fmt(cplx z) { return fmt(z.real(), 8) + (z.imag() < 0 ? "" : "+") + fmt(z.imag(), 8) + "i"; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

GridSpec dirichlet(double half_length, int n) {
  GridSpec g{1, half_length, n, Boundary::Dirichlet};
  g.max_dimension = std::max<std::size_t>(g.max_dimension, static_cast<std::size_t>(n));
  return g;
}

FilterPolicy acceptance_policy() {
  FilterPolicy p;
  p.stability_check = true;
  return p;
}

struct Solved {
  SampledPotential v;
  OperatorMatrix op;
  FilteredSpectrum filtered;
  ComplexSpectrum full;
};

Solved solve(const PotentialSpec& spec, const GridSpec& grid, Sampling sampling, Kinetic kinetic = Kinetic::Laplacian) {
  SampledPotential v = sample_potential(spec, grid, sampling);
  OperatorMatrix op = build_operator(grid, v, kinetic);
  const OperatorFactory rebuild = [&](const GridSpec& g) {
    return build_operator(g, sample_potential(spec, g, sampling), kinetic);
  };
  ComplexSpectrum full;
  FilteredSpectrum filtered = solve_and_filter(op, acceptance_policy(), rebuild, &full);
  return {std::move(v), std::move(op), std::move(filtered), std::move(full)};
}

InequalityRequest make_request(Which which, double gamma, ConstantMode mode, std::optional<double> kappa = {},
                               bool refined = false) {
  InequalityRequest r;
  r.which = which;
  r.gamma = gamma;
  r.constant_mode = std::move(mode);
  r.kappa = kappa;
  r.refined = refined;
  return r;
}

// Shared corpus for criteria 5, 6 and 7.
constexpr std::uint64_t kCorpusSeed = 20;
constexpr int kCorpusSize = 50;

const std::vector<Solved>& corpus() {
  static const std::vector<Solved> solved = [] {
    std::vector<Solved> out;
    const GridSpec grid = dirichlet(24.0, 800);
    for (int i = 0; i < kCorpusSize; ++i) {
      out.push_back(solve(random_gaussian_sum(kCorpusSeed, static_cast<std::uint64_t>(i)), grid, Sampling::Pointwise));
    }
    return out;
  }();
  return solved;
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  out = o.str();
  return code;
}

// 1. Matrix-level comparison on the seeded fuzz corpus, through the CLI.
Outcome lemma_fuzz_cli() {
  Checks c;
  const auto t0 = Clock::now();
  std::string out;
  const int code = run_cli({"lemma-fuzz", "--seed", "1", "--count", "200", "--n", "60"}, out);
  const double secs = seconds_since(t0);
  c.expect(code == cli::kOk, "exit code " + std::to_string(code));
  const json j = json::parse(out);
  c.expect(j["operators"] == 200 && j["checks"] == 3000, "wrong corpus size");
  c.expect(j["failures"] == 0, std::to_string(j["failures"].get<int>()) + " ratios above 1 + 1e-9");
  c.expect(j["max_ratio"].get<double>() <= 1.0 + 1e-9, "max ratio " + fmt(j["max_ratio"].get<double>(), 12));
  c.expect(secs < 60.0, "runtime " + fmt(secs) + " s");
  c.note("checks=" + std::to_string(j["checks"].get<int>()) + " max_ratio=" + fmt(j["max_ratio"].get<double>(), 10) +
         " time=" + fmt(secs, 3) + "s");
  return c.outcome();
}

// Narrow box of total strength 4, shared by criteria 2 and 3.
const Solved& narrow_box() {
  static const Solved s = solve(delta_like({4.0, 0.0}, 0.01), dirichlet(40.0, 8000), Sampling::Pointwise);
  return s;
}

// 2. Delta-like well against -c^2/4 and the d = 1 bound |lambda| <= (int |V|)^2 / 4.
Outcome davies_saturation() {
  Checks c;
  const auto t0 = Clock::now();
  const Solved& s = narrow_box();
  const double secs = seconds_since(t0);
  c.expect(s.filtered.kept.size() == 1, std::to_string(s.filtered.kept.size()) + " kept eigenvalues");
  if (!s.filtered.kept.empty()) {
    const cplx lambda = s.filtered.kept.front();
    const cplx exact = delta_eigenvalue({4.0, 0.0});
    const double err = std::abs(lambda - exact);
    c.expect(err < 0.04, "|lambda + 4| = " + fmt(err) + " >= 0.04");
    const auto rep = check_single(lambda, make_request(Which::Davies2, 1.0, ConstantMode::unit()), s.v);
    c.expect(rep.ratio >= 0.95 && rep.ratio <= 1.0 + 1e-6, "davies2 ratio " + fmt(rep.ratio, 10));
    c.note("lambda=" + fmt(lambda) + " |lambda+4|=" + fmt(err) + " ratio=" + fmt(rep.ratio, 8));
  }
  c.expect(secs < 300.0, "runtime " + fmt(secs) + " s");
  c.note("n=8000 time=" + fmt(secs, 3) + "s");
  return c.outcome();
}

// 3. One-bound-state bound at gamma = 1/2 with its sharp constant 1/2.
Outcome one_bound_saturation() {
  Checks c;
  const Solved& s = narrow_box();
  c.expect(!s.filtered.kept.empty(), "no kept eigenvalue");
  for (const cplx lambda : s.filtered.kept) {
    const auto rep = check_single(lambda, make_request(Which::Single_9, 0.5, ConstantMode::sharp_known()), s.v);
    c.expect(rep.ratio >= 0.95 && rep.ratio <= 1.0 + 1e-6, "single_9 ratio " + fmt(rep.ratio, 10));
    c.note("ratio=" + fmt(rep.ratio, 8));
  }
  return c.outcome();
}

// 4. Complex square well: grid against the transcendental-equation roots.
Outcome oracle_cross_validation() {
  Checks c;
  const auto t0 = Clock::now();
  PotentialSpec well;
  well.terms.push_back(PotentialTerm::box({-3.0, -2.0}, {0.0}, {1.0}));
  const Solved s = solve(well, dirichlet(30.0, 4000), Sampling::CellAverage);
  const std::vector<cplx> exact = square_well_eigenvalues({{3.0, 2.0}, 1.0});
  c.expect(s.filtered.kept.size() == exact.size(),
           std::to_string(s.filtered.kept.size()) + " kept vs " + std::to_string(exact.size()) + " roots");
  double worst = 0.0;
  for (const cplx z : exact) {
    double best = INFINITY;
    for (const cplx w : s.filtered.kept) best = std::min(best, std::abs(w - z) / std::abs(z));
    worst = std::max(worst, best);
  }
  c.expect(worst < 1e-3, "worst relative error " + fmt(worst));
  c.note("roots=" + std::to_string(exact.size()) + " worst_rel=" + fmt(worst, 3) + " time=" + fmt(seconds_since(t0), 3) +
         "s");
  return c.outcome();
}

// 5. Sum inequalities on the random corpus.
Outcome corpus_sums() {
  Checks c;
  const auto t0 = Clock::now();
  const auto& solved = corpus();
  std::vector<InequalityRequest> requests;
  const std::vector<std::pair<double, ConstantMode>> settings{
      {1.5, ConstantMode::sharp_known()}, {2.0, ConstantMode::sharp_known()}, {1.0, ConstantMode::scaled(2.0)}};
  for (const auto& [gamma, mode] : settings) {
    requests.push_back(make_request(Which::Thm1_i, gamma, mode));
    for (double kappa : {0.5, 2.0}) {
      requests.push_back(make_request(Which::Thm1_ii, gamma, mode, kappa));
      requests.push_back(make_request(Which::Thm1_ii, gamma, mode, kappa, true));
    }
    requests.push_back(make_request(Which::Cor_i, gamma, mode));
    requests.push_back(make_request(Which::Cor_i, gamma, mode, {}, true));
    requests.push_back(make_request(Which::Cor_ii, gamma, mode, 1.0));
  }
  double worst = 0.0;
  std::string worst_label;
  int evaluated = 0;
  std::size_t eigenvalues = 0;
  for (std::size_t i = 0; i < solved.size(); ++i) {
    eigenvalues += solved[i].filtered.kept.size();
    for (const auto& r : requests) {
      const auto rep = check_sum(r, solved[i].filtered, solved[i].v);
      ++evaluated;
      const std::string label = "#" + std::to_string(i) + " " + to_string(r.which) + (r.refined ? "+refined" : "") +
                                " gamma=" + fmt(r.gamma) + (r.kappa ? " kappa=" + fmt(*r.kappa) : "");
      c.expect(rep.ratio <= 1.05, label + " ratio " + fmt(rep.ratio));
      if (rep.ratio > worst) {
        worst = rep.ratio;
        worst_label = label;
      }
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 1800.0, "runtime " + fmt(secs) + " s");
  c.note("potentials=" + std::to_string(solved.size()) + " kept=" + std::to_string(eigenvalues) +
         " checks=" + std::to_string(evaluated) + " max_ratio=" + fmt(worst, 4) + " (" + worst_label + ") time=" +
         fmt(secs, 3) + "s");
  return c.outcome();
}

// 6. Solver invariants on every corpus matrix.
Outcome corpus_invariants() {
  Checks c;
  const auto& solved = corpus();
  const GridSpec grid = solved.front().op.grid();
  double conj_worst = 0.0, trace_worst = 0.0, herm_worst = 0.0, imag_worst = 0.0;
  for (std::size_t i = 0; i < solved.size(); ++i) {
    const auto& s = solved[i];
    const std::string tag = "#" + std::to_string(i);
    double scale = 0.0;
    for (const cplx z : s.full.values) scale = std::max(scale, std::abs(z));

    std::vector<cplx> conjugated;
    for (const cplx z : s.full.values) conjugated.push_back(std::conj(z));
    const double conj_err = max_pairing_distance(eigenvalues(s.op.conj()).values, conjugated) / scale;
    c.expect(conj_err <= 1e-9, tag + " conjugation " + fmt(conj_err));
    conj_worst = std::max(conj_worst, conj_err);

    cplx sum{};
    for (const cplx z : s.full.values) sum += z;
    const cplx trace = s.op.trace();
    const double trace_err = std::abs(sum - trace) / std::abs(trace);
    c.expect(trace_err <= 1e-9, tag + " trace " + fmt(trace_err));
    trace_worst = std::max(trace_worst, trace_err);

    std::vector<cplx> real_v;
    for (const cplx z : s.op.potential()) real_v.emplace_back(z.real(), 0.0);
    const OperatorMatrix real_op = s.op.with_potential(real_v);
    const auto general = eigenvalues(real_op).values;
    const auto symmetric = hermitian_eigenvalues(hermitian_combination(real_op, 0.0));
    double real_scale = 0.0;
    for (double x : symmetric) real_scale = std::max(real_scale, std::abs(x));
    std::vector<double> re;
    double imag_max = 0.0;
    for (const cplx z : general) {
      re.push_back(z.real());
      imag_max = std::max(imag_max, std::abs(z.imag()));
    }
    std::sort(re.begin(), re.end());
    double herm_err = 0.0;
    for (std::size_t k = 0; k < re.size(); ++k) herm_err = std::max(herm_err, std::abs(re[k] - symmetric[k]));
    herm_err /= real_scale;
    imag_max /= real_scale;
    c.expect(re.size() == symmetric.size() && herm_err <= 1e-9, tag + " hermitian path " + fmt(herm_err));
    c.expect(imag_max <= 1e-9, tag + " real-V imaginary parts " + fmt(imag_max));
    herm_worst = std::max(herm_worst, herm_err);
    imag_worst = std::max(imag_worst, imag_max);
  }

  const SampledPotential zero{grid, std::vector<cplx>(grid.size(), cplx{})};
  const auto free_eigs = eigenvalues(build_operator(grid, zero, Kinetic::Laplacian)).values;
  const auto exact = dirichlet_laplacian_spectrum(grid);
  std::vector<double> re;
  for (const cplx z : free_eigs) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  double closed_worst = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) closed_worst = std::max(closed_worst, std::abs(re[k] - exact[k]) / exact[k]);
  c.expect(closed_worst < 1e-10, "closed-form Laplacian " + fmt(closed_worst));

  c.note("conj=" + fmt(conj_worst, 3) + " trace=" + fmt(trace_worst, 3) + " hermitian=" + fmt(herm_worst, 3) +
         " real_imag=" + fmt(imag_worst, 3) + " closed_form=" + fmt(closed_worst, 3));
  return c.outcome();
}

// 7. Every kept eigenvalue lies on an allowed pixel of the exclusion raster.
Outcome region_consistency() {
  Checks c;
  const auto t0 = Clock::now();
  const auto& solved = corpus();
  int checked = 0;
  std::size_t excluded_total = 0;
  for (std::size_t i = 0; i < solved.size(); ++i) {
    const auto& kept = solved[i].filtered.kept;
    if (kept.empty()) continue;
    double re_lo = INFINITY, re_hi = -INFINITY, im_abs = 0.0;
    for (const cplx z : kept) {
      re_lo = std::min(re_lo, z.real());
      re_hi = std::max(re_hi, z.real());
      im_abs = std::max(im_abs, std::abs(z.imag()));
    }
    // Inflate by 20%; a degenerate extent borrows the spectrum's size.
    const double size = std::max({re_hi - re_lo, 2.0 * im_abs, 1e-3 * (std::abs(re_lo) + std::abs(re_hi) + 1.0)});
    const double pad_re = 0.1 * std::max(re_hi - re_lo, size);
    const double im_half = 1.2 * std::max(im_abs, 0.5 * size);
    const Window w{re_lo - pad_re, re_hi + pad_re, -im_half, im_half};
    const auto r = exclusion_region(solved[i].v, 1.0, ConstantMode::scaled(2.0), w, {400, 400}, true);
    for (const cplx z : kept) {
      const auto pix = r.locate(z);
      ++checked;
      c.expect(pix && !r.excluded(pix->first, pix->second), "#" + std::to_string(i) + " eigenvalue " + fmt(z) +
                                                                 " on an excluded pixel");
    }
    excluded_total += r.sidecar()["excluded_pixels"].get<std::size_t>();
  }
  c.note("eigenvalues=" + std::to_string(checked) + " excluded_pixels=" + std::to_string(excluded_total) +
         " time=" + fmt(seconds_since(t0), 3) + "s");
  return c.outcome();
}

// 8. Closed forms and limits of the constants.
Outcome constant_identities() {
  Checks c;
  c.expect(classical_constant(1.5, 1) == 0.1875, "classical(3/2, 1) = " + fmt(classical_constant(1.5, 1), 17));

  boost::math::quadrature::tanh_sinh<double> quad;
  double lift_worst = 0.0;
  for (double g : {1.1, 1.5, 2.0, 3.0, 5.0}) {
    // s = -1: the integrand t^{g-2} (t - 1)_- lives on [0, 1].
    const double integral = quad.integrate([g](double t) { return std::pow(t, g - 2.0) * (1.0 - t); }, 0.0, 1.0);
    const double err = std::abs(riesz_lift_constant(g) - integral) / integral;
    c.expect(err < 1e-8, "lift constant at gamma " + fmt(g) + " off by " + fmt(err));
    lift_worst = std::max(lift_worst, err);
  }

  double cone_worst = 0.0;
  for (double g : {1.0, 1.5, 2.0, 3.0}) {
    for (int d : {1, 2, 3}) {
      for (const ConstantMode& mode : {ConstantMode::classical(), ConstantMode::scaled(2.0)}) {
        const double limit = cone_constant(g, d, 1e8, mode).value;
        const double corollary = corollary_constants(g, d, 1.0, mode).eigenvalue_sum.value;
        const double err = std::abs(limit - corollary) / corollary;
        c.expect(err < 1e-5, "cone limit gamma=" + fmt(g) + " d=" + std::to_string(d) + " off by " + fmt(err));
        cone_worst = std::max(cone_worst, err);
      }
    }
  }
  c.note("lift_rel=" + fmt(lift_worst, 3) + " cone_limit_rel=" + fmt(cone_worst, 3));
  return c.outcome();
}

// 9. Saturation search, determinism and the gamma sweep.
Outcome optimizer_runs() {
  Checks c;
  const auto t0 = Clock::now();
  ltlab::testing::TempDir dir;
  const auto grid = dir.write("grid.json", R"({"dim":1,"half_length":5,"points_per_dim":499})");
  const auto family = dir.write("family.json", R"({"kind":"delta_like","strength":[4,0]})");
  std::vector<std::string> outputs;
  for (const char* name : {"first.json", "second.json"}) {
    std::string stdout_text;
    const int code = run_cli({"saturate", "--grid", grid, "--family", family, "--ineq", "davies2", "--restarts", "5",
                              "--max-evals", "200", "--seed", "42", "--out", dir.file(name)},
                             stdout_text);
    c.expect(code == cli::kOk, std::string(name) + " exit code " + std::to_string(code));
    outputs.push_back(ltlab::testing::slurp(dir.file(name)));
  }
  c.expect(!outputs[0].empty() && outputs[0] == outputs[1], "reruns differ");
  const double best = json::parse(outputs[0])["best_ratio"].get<double>();
  c.expect(best >= 0.9, "best davies2 ratio " + fmt(best));
  c.note("davies2_best=" + fmt(best, 8));

  FamilySpec gaussian;
  gaussian.bounds = FamilySpec::default_bounds(FamilyKind::GaussianSum, 1, 1);
  OptimizerConfig config;
  config.pipeline.grid = dirichlet(8.0, 300);
  const std::vector<double> gammas{0.6, 1.0, 1.5, 2.0};
  const auto table = gamma_sweep(gaussian, gammas, make_request(Which::Thm1_i, 1.0, ConstantMode::scaled(2.0)), config);
  c.expect(table.size() == gammas.size(), "sweep size");
  std::string ratios;
  for (const auto& e : table) {
    c.expect(e.result.has_value(), "gamma " + fmt(e.gamma) + ": " + e.error);
    if (!e.result) continue;
    const double r = e.result->best_ratio;
    ratios += (ratios.empty() ? "" : " ") + fmt(e.gamma) + ":" + fmt(r, 4);
    if (e.gamma < 1.0) {
      c.expect(e.conjectural && e.result->conjectural && std::isfinite(r), "gamma 0.6 not flagged conjectural");
    } else {
      c.expect(!e.conjectural, "gamma " + fmt(e.gamma) + " flagged conjectural");
      c.expect(r <= 1.0 + kContinuumSlack, "gamma " + fmt(e.gamma) + " best ratio " + fmt(r));
    }
  }
  c.note("sweep[thm1_i scaled:2]=" + ratios + " time=" + fmt(seconds_since(t0), 3) + "s");
  return c.outcome();
}

// 10. Relativistic kinetic term |p| on a periodic interval.
Outcome relativistic_variant() {
  Checks c;
  const GridSpec grid{1, 8.0, 60, Boundary::Periodic};
  double lemma_worst = 0.0;
  double sum_worst = 0.0;
  int checks = 0;
  for (int i = 0; i < 50; ++i) {
    const PotentialSpec spec = random_gaussian_sum(kCorpusSeed + 1, static_cast<std::uint64_t>(i));
    const OperatorMatrix op = build_operator(grid, sample_potential(spec, grid), Kinetic::Relativistic);
    const ComplexSpectrum spectrum = eigenvalues(op);
    for (double alpha : {0.0, 1.0, -1.0, 3.0, -3.0}) {
      for (double gamma : {1.0, 1.5, 2.0}) {
        const double ratio = lemma_check(op, spectrum, alpha, gamma).ratio;
        ++checks;
        c.expect(ratio <= 1.0 + 1e-9, "#" + std::to_string(i) + " lemma ratio " + fmt(ratio, 12));
        lemma_worst = std::max(lemma_worst, ratio);
      }
    }
    FilterPolicy policy;
    policy.boundary_fraction_max.reset();  // no walls on a periodic interval
    FilterContext context;
    context.op = &op;
    const FilteredSpectrum f = filter_spectrum(spectrum, grid, policy, context);
    InequalityRequest r = make_request(Which::Thm1_i, 1.0, ConstantMode::scaled(2.0));
    r.kinetic = Kinetic::Relativistic;
    const auto rep = check_sum(r, f, sample_potential(spec, grid));
    if (std::isfinite(rep.ratio)) sum_worst = std::max(sum_worst, rep.ratio);
  }
  c.note("checks=" + std::to_string(checks) + " lemma_max=" + fmt(lemma_worst, 12) +
         " thm1_i(gamma=1, exponent 2, scaled:2, reported only) max=" + fmt(sum_worst, 4));
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"matrix lemma fuzz", lemma_fuzz_cli},
      {"davies saturation", davies_saturation},
      {"one-bound-state saturation", one_bound_saturation},
      {"square-well oracle cross-validation", oracle_cross_validation},
      {"sum inequalities on corpus", corpus_sums},
      {"conjugation and consistency invariants", corpus_invariants},
      {"region consistency", region_consistency},
      {"constant identities", constant_identities},
      {"optimizer", optimizer_runs},
      {"relativistic variant", relativistic_variant},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
