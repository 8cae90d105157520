#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "ltlab/discretize.hpp"

namespace ltlab::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("ltlab-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name, std::ios::binary) << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline GridSpec dirichlet(double half_length, int n, int dim = 1) {
  GridSpec g;
  g.dim = dim;
  g.half_length = half_length;
  g.points_per_dim = n;
  g.boundary = Boundary::Dirichlet;
  return g;
}

inline GridSpec periodic(double half_length, int n) {
  GridSpec g = dirichlet(half_length, n);
  g.boundary = Boundary::Periodic;
  return g;
}

// Random complex Gaussian sum in d = 1, driven by a std::mt19937_64 so the
// tests do not share a generator with the library corpus.
inline PotentialSpec random_potential(std::mt19937_64& rng, double amp = 10.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PotentialSpec spec;
  const int terms = 1 + static_cast<int>(rng() % 3);
  for (int t = 0; t < terms; ++t) {
    spec.terms.push_back(PotentialTerm::gaussian({amp * (u(rng) - 0.5), amp * u(rng)}, {2.0 * u(rng)},
                                                 {0.6 + 0.5 * (u(rng) + 1.0)}));
  }
  return spec;
}

}  // namespace ltlab::testing
