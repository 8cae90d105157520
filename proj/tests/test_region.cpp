#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "ltlab/error.hpp"
#include "ltlab/inequalities.hpp"
#include "support.hpp"

namespace ltlab {
namespace {

using testing::dirichlet;

SampledPotential sampled(const PotentialSpec& spec, const GridSpec& g) { return sample_potential(spec, g); }

PotentialSpec gaussian(cplx amp, double width = 1.0) {
  PotentialSpec s;
  s.terms.push_back(PotentialTerm::gaussian(amp, {0.0}, {width}));
  return s;
}

TEST(Region, ZeroPotentialExcludesEverything) {
  const GridSpec g = dirichlet(4.0, 40);
  const SampledPotential zero{g, std::vector<cplx>(40, cplx{})};
  const auto r = exclusion_region(zero, 1.0, ConstantMode::scaled(2.0), {-2.0, 2.0, -1.0, 1.0}, {30, 20}, true);
  for (auto m : r.mask) EXPECT_EQ(m, 1);
  EXPECT_EQ(r.sidecar()["excluded_pixels"], 600);
  // Only the half-line itself survives.
  EXPECT_FALSE(excluded_point({3.0, 0.0}, r));
  EXPECT_FALSE(excluded_point({0.0, 0.0}, r));
  EXPECT_TRUE(excluded_point({-0.1, 0.0}, r));
}

TEST(Region, RealPotentialGivesConjugationSymmetricMask) {
  const GridSpec g = dirichlet(6.0, 100);
  const auto r = exclusion_region(sampled(gaussian({-5.0, 0.0}), g), 1.0, ConstantMode::scaled(2.0),
                                  {-20.0, 20.0, -15.0, 15.0}, {64, 48}, true);
  std::size_t excluded = 0;
  for (int iy = 0; iy < 48; ++iy) {
    for (int ix = 0; ix < 64; ++ix) {
      EXPECT_EQ(r.excluded(ix, iy), r.excluded(ix, 47 - iy)) << ix << "," << iy;
      excluded += r.excluded(ix, iy);
    }
  }
  EXPECT_GT(excluded, 0u);
  EXPECT_LT(excluded, 64u * 48u);
}

TEST(Region, EigenvaluesLieInAllowedPixels) {
  const GridSpec g = dirichlet(8.0, 300);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) {
    const auto v = sampled(testing::random_potential(rng, 20.0), g);
    const auto f = solve_and_filter(build_operator(g, v, Kinetic::Laplacian), FilterPolicy{});
    double extent = 1.0;
    for (const cplx z : f.kept) extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
    extent *= 1.2;
    const auto r = exclusion_region(v, 1.0, ConstantMode::scaled(2.0), {-extent, extent, -extent, extent},
                                    {100, 100}, true);
    for (const cplx z : f.kept) {
      const auto pix = r.locate(z);
      ASSERT_TRUE(pix.has_value());
      EXPECT_FALSE(excluded_point(z, r)) << z;
    }
  }
}

TEST(Region, LocateInvertsPixelCenter) {
  ExclusionRaster r;
  r.window = {-3.0, 5.0, -2.0, 2.0};
  r.resolution = {17, 9};
  for (int iy = 0; iy < 9; ++iy) {
    for (int ix = 0; ix < 17; ++ix) {
      const auto pix = r.locate(r.pixel_center(ix, iy));
      ASSERT_TRUE(pix);
      EXPECT_EQ(pix->first, ix);
      EXPECT_EQ(pix->second, iy);
    }
  }
  EXPECT_FALSE(r.locate({6.0, 0.0}));
  EXPECT_FALSE(r.locate({0.0, -2.5}));
  EXPECT_EQ(r.locate({5.0, 2.0}), std::make_pair(16, 8));
}

TEST(Region, PgmLayout) {
  const GridSpec g = dirichlet(4.0, 40);
  const auto r = exclusion_region(sampled(gaussian({-3.0, 1.0}), g), 1.0, ConstantMode::scaled(2.0),
                                  {-10.0, 10.0, -5.0, 5.0}, {7, 5}, false);
  const std::string pgm = r.to_pgm();
  const std::string header = "P5\n7 5\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  ASSERT_EQ(pgm.size(), header.size() + 35);
  for (int iy = 0; iy < 5; ++iy) {
    for (int ix = 0; ix < 7; ++ix) {
      const auto byte = static_cast<unsigned char>(pgm[header.size() + static_cast<std::size_t>((4 - iy) * 7 + ix)]);
      EXPECT_EQ(byte, r.excluded(ix, iy) ? 255 : 0);
    }
  }
  const auto side = r.sidecar();
  for (const char* key : {"window", "resolution", "gamma", "constant_mode", "include_davies", "norms", "constants",
                          "pixel_values", "row_order", "excluded_pixels"}) {
    EXPECT_TRUE(side.contains(key)) << key;
  }
  EXPECT_EQ(side["constant_mode"], "scaled:2");
}

TEST(Region, RejectsBadResolutionAndWindow) {
  const GridSpec g = dirichlet(4.0, 40);
  const auto v = sampled(gaussian({-3.0, 0.0}), g);
  const auto mode = ConstantMode::scaled(2.0);
  EXPECT_THROW(exclusion_region(v, 1.0, mode, {}, {0, 10}, false), DomainError);
  EXPECT_THROW(exclusion_region(v, 1.0, mode, {}, {10, 4097}, false), DomainError);
  EXPECT_THROW(exclusion_region(v, 1.0, mode, {1.0, 1.0, -1.0, 1.0}, {10, 10}, false), DomainError);
  EXPECT_THROW(exclusion_region(v, 0.3, mode, {}, {10, 10}, false), DomainError);
}

TEST(Region, DeterministicAcrossThreadCounts) {
  const GridSpec g = dirichlet(4.0, 80);
  const auto v = sampled(gaussian({-8.0, 3.0}, 0.7), g);
  const Window w{-30.0, 30.0, -30.0, 30.0};
  setenv("LTLAB_THREADS", "1", 1);
  const auto one = exclusion_region(v, 1.5, ConstantMode::scaled(2.0), w, {120, 90}, true);
  setenv("LTLAB_THREADS", "3", 1);
  const auto three = exclusion_region(v, 1.5, ConstantMode::scaled(2.0), w, {120, 90}, true);
  unsetenv("LTLAB_THREADS");
  EXPECT_EQ(one.mask, three.mask);
  EXPECT_EQ(one.to_pgm(), three.to_pgm());
}

}  // namespace
}  // namespace ltlab
