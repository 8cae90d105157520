#pragma once

// Seeded random potentials and the Lemma fuzz run over them.

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltlab/discretize.hpp"

namespace ltlab {

struct CorpusOptions {
  int max_terms = 3;
  double amp_re_min = -20.0;
  double amp_re_max = 5.0;
  double amp_im_max = 10.0;  // Im amp uniform in [-max, max]
  double center_max = 4.0;
  double width_min = 0.2;
  double width_max = 2.0;
};

/// d = 1 Gaussian sum; member `index` of the corpus for `seed`. Uses the
/// same counter-based generator as the optimizer.
PotentialSpec random_gaussian_sum(std::uint64_t seed, std::uint64_t index, const CorpusOptions& options = {});

struct LemmaFuzzOptions {
  std::uint64_t seed = 1;
  int count = 200;
  GridSpec grid{1, 8.0, 60, Boundary::Dirichlet};
  Kinetic kinetic = Kinetic::Laplacian;
  std::vector<double> alphas{0.0, 1.0, -1.0, 3.0, -3.0};
  std::vector<double> gammas{1.0, 1.5, 2.0};
  double tolerance = 1e-9;
  CorpusOptions corpus;
};

struct LemmaFuzzSummary {
  int operators = 0;
  int checks = 0;
  int failures = 0;
  double max_ratio = 0.0;
  std::uint64_t worst_index = 0;
  double worst_alpha = 0.0;
  double worst_gamma = 0.0;

  bool passed() const { return failures == 0; }
  nlohmann::json to_json() const;
};

LemmaFuzzSummary lemma_fuzz(const LemmaFuzzOptions& options);

}  // namespace ltlab
