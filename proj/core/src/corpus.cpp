#include "ltlab/corpus.hpp"

#include <cmath>

#include "ltlab/eigensolve.hpp"
#include "ltlab/inequalities.hpp"
#include "ltlab/optimizer.hpp"
#include "ltlab/parallel.hpp"

namespace ltlab {

PotentialSpec random_gaussian_sum(std::uint64_t seed, std::uint64_t index, const CorpusOptions& o) {
  std::uint64_t k = 0;
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * uniform_draw(seed, index, k++); };
  PotentialSpec spec;
  spec.dim = 1;
  const int terms = 1 + static_cast<int>(draw(0.0, o.max_terms - 1e-9));
  for (int t = 0; t < terms; ++t) {
    const cplx amp{draw(o.amp_re_min, o.amp_re_max), draw(-o.amp_im_max, o.amp_im_max)};
    const double center = draw(-o.center_max, o.center_max);
    // Log-uniform width.
    const double width = std::exp(draw(std::log(o.width_min), std::log(o.width_max)));
    spec.terms.push_back(PotentialTerm::gaussian(amp, {center}, {width}));
  }
  return spec;
}

nlohmann::json LemmaFuzzSummary::to_json() const {
  return {{"operators", operators}, {"checks", checks},           {"failures", failures},
          {"max_ratio", max_ratio}, {"worst_index", worst_index}, {"worst_alpha", worst_alpha},
          {"worst_gamma", worst_gamma}};
}

LemmaFuzzSummary lemma_fuzz(const LemmaFuzzOptions& options) {
  options.grid.validate();
  struct PerOperator {
    int failures = 0;
    double max_ratio = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
  };
  std::vector<PerOperator> results(static_cast<std::size_t>(options.count));
  parallel_for(results.size(), [&](std::size_t i) {
    const PotentialSpec spec = random_gaussian_sum(options.seed, i, options.corpus);
    const OperatorMatrix op = build_operator(options.grid, sample_potential(spec, options.grid), options.kinetic);
    const ComplexSpectrum spectrum = eigenvalues(op);
    PerOperator& r = results[i];
    for (const double alpha : options.alphas) {
      for (const double gamma : options.gammas) {
        const double ratio = lemma_check(op, spectrum, alpha, gamma).ratio;
        if (!(ratio <= 1.0 + options.tolerance)) ++r.failures;
        if (ratio > r.max_ratio) {
          r.max_ratio = ratio;
          r.alpha = alpha;
          r.gamma = gamma;
        }
      }
    }
  });

  LemmaFuzzSummary s;
  s.operators = options.count;
  s.checks = options.count * static_cast<int>(options.alphas.size() * options.gammas.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    s.failures += results[i].failures;
    if (results[i].max_ratio > s.max_ratio) {
      s.max_ratio = results[i].max_ratio;
      s.worst_index = i;
      s.worst_alpha = results[i].alpha;
      s.worst_gamma = results[i].gamma;
    }
  }
  return s;
}

}  // namespace ltlab
