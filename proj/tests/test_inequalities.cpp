#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ltlab/error.hpp"
#include "ltlab/inequalities.hpp"
#include "support.hpp"

namespace ltlab {
namespace {

using testing::dirichlet;
using testing::periodic;

InequalityRequest request(Which w, double gamma = 1.0) {
  InequalityRequest r;
  r.which = w;
  r.gamma = gamma;
  r.constant_mode = ConstantMode::scaled(2.0);
  return r;
}

TEST(Which, NamesRoundTrip) {
  for (Which w : {Which::Thm1_i, Which::Thm1_ii, Which::Cor_i, Which::Cor_ii, Which::Lemma, Which::Single_9,
                  Which::Single_10, Which::Single_11, Which::Davies2}) {
    EXPECT_EQ(parse_which(to_string(w)), w);
  }
  EXPECT_THROW(parse_which("thm2"), DomainError);
}

TEST(Request, FlagRules) {
  auto r = request(Which::Thm1_ii);
  EXPECT_THROW(r.validate(1), DomainError);
  r.kappa = 0.5;
  EXPECT_NO_THROW(r.validate(1));
  r.kappa = -1.0;
  EXPECT_THROW(r.validate(1), DomainError);

  auto t = request(Which::Thm1_i);
  t.kappa = 1.0;
  EXPECT_THROW(t.validate(1), DomainError);
  t.kappa.reset();
  t.refined = true;
  EXPECT_THROW(t.validate(1), DomainError);

  auto lemma = request(Which::Lemma);
  EXPECT_THROW(lemma.validate(1), DomainError);
  lemma.alpha = 1.0;
  EXPECT_NO_THROW(lemma.validate(1));

  auto low = request(Which::Cor_i, 0.7);
  EXPECT_THROW(low.validate(1), DomainError);
  low.allow_conjectural = true;
  EXPECT_NO_THROW(low.validate(1));
  low.gamma = 0.3;
  EXPECT_THROW(low.validate(1), DomainError);

  EXPECT_THROW(request(Which::Davies2).validate(2), DomainError);
  EXPECT_THROW(request(Which::Single_9, 0.2).validate(1), DomainError);
}

TEST(Request, PotentialExponent) {
  auto r = request(Which::Thm1_i, 1.5);
  EXPECT_EQ(r.potential_exponent(1), 2.0);
  r.kinetic = Kinetic::Relativistic;
  EXPECT_EQ(r.potential_exponent(1), 2.5);
}

TEST(ConeSelect, Examples) {
  const std::vector<cplx> z{{-1.0, 0.0}, {1.0, 0.5}, {1.0, 3.0}, {-2.0, 1.0}, {-1.0, 3.0}};
  const auto outside = cone_select(z, 1.0, ConeSide::OutsideCone);
  EXPECT_EQ(outside, (std::vector<cplx>{{-1.0, 0.0}, {1.0, 3.0}, {-2.0, 1.0}, {-1.0, 3.0}}));
  const auto inside = cone_select(z, 1.0, ConeSide::InsideCone);
  EXPECT_EQ(inside, (std::vector<cplx>{{-1.0, 0.0}, {-2.0, 1.0}}));
  EXPECT_THROW(cone_select(z, 0.0, ConeSide::InsideCone), DomainError);
}

TEST(Lemma, HoldsOnRandomOperators) {
  std::mt19937_64 rng(21);
  const GridSpec g = dirichlet(6.0, 50);
  const GridSpec p = periodic(6.0, 50);
  for (int i = 0; i < 30; ++i) {
    const auto spec = testing::random_potential(rng, 20.0);
    for (const auto& [grid, kind] : {std::pair{g, Kinetic::Laplacian}, std::pair{p, Kinetic::Relativistic}}) {
      const auto op = build_operator(grid, sample_potential(spec, grid), kind);
      for (double alpha : {0.0, 1.0, -1.0, 3.0, -3.0}) {
        for (double gamma : {1.0, 1.5, 2.0}) {
          const auto r = lemma_check(op, alpha, gamma);
          EXPECT_LE(r.ratio, 1.0 + 1e-9) << i << " " << alpha << " " << gamma;
          EXPECT_TRUE(r.satisfied);
        }
      }
    }
  }
}

TEST(Lemma, EqualityForRealPotentialWithoutTilt) {
  const GridSpec g = dirichlet(5.0, 80);
  PotentialSpec s;
  s.terms.push_back(PotentialTerm::gaussian({-30.0, 0.0}, {0.0}, {1.0}));
  const auto op = build_operator(g, sample_potential(s, g), Kinetic::Laplacian);
  const auto r = lemma_check(op, 0.0, 1.0);
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_NEAR(r.ratio, 1.0, 1e-12);
  EXPECT_THROW(lemma_check(op, 0.0, 0.5), DomainError);
}

TEST(CheckSum, HandComputedValues) {
  const GridSpec g = dirichlet(2.0, 3);  // h = 1, nodes -1, 0, 1
  SampledPotential v{g, {{-2.0, 1.0}, {0.0, -1.0}, {1.0, 0.0}}};
  FilteredSpectrum f;
  f.kept = {{-1.0, 0.0}, {-2.0, 2.0}, {1.0, 4.0}, {2.0, 0.5}};

  auto r = request(Which::Thm1_i, 1.5);
  r.constant_mode = ConstantMode::unit();
  auto rep = check_sum(r, f, v);
  EXPECT_DOUBLE_EQ(rep.lhs, 1.0 + std::pow(2.0, 1.5));
  EXPECT_DOUBLE_EQ(rep.rhs, std::pow(2.0, 2.0));  // int (Re V)_-^2
  EXPECT_EQ(rep.eigenvalues_used.size(), 2u);

  r.which = Which::Cor_ii;
  r.kappa = 1.0;
  rep = check_sum(r, f, v);
  EXPECT_DOUBLE_EQ(rep.lhs, 1.0 + std::pow(std::sqrt(8.0), 1.5));
  EXPECT_DOUBLE_EQ(rep.rhs, 2.0 * 4.0);

  r.which = Which::Thm1_ii;
  r.kappa = 2.0;
  rep = check_sum(r, f, v);
  // Outside |Im| >= 2 Re: -1, -2+2i, 1+4i.
  EXPECT_EQ(rep.eigenvalues_used.size(), 3u);
  const double abs_int = 5.0 + 1.0 + 1.0;  // |V|^2 summed, h = 1
  EXPECT_NEAR(rep.rhs, std::pow(2.0, 1 + 0.75 + 0.25) * std::pow(2.0, 2.0) * abs_int, 1e-12);

  r.refined = true;
  const double refined_int = 0.5 * (9.0 + 1.0);  // ((Re V)_- + |Im V|)^2 / 2
  EXPECT_NEAR(check_sum(r, f, v).rhs, std::pow(2.0, 2.0) * std::pow(2.0, 2.0) * refined_int, 1e-12);
}

TEST(CheckSum, ConjecturalFlag) {
  const GridSpec g = dirichlet(2.0, 3);
  SampledPotential v{g, {{-2.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}};
  FilteredSpectrum f;
  f.kept = {{-1.0, 0.0}};
  auto r = request(Which::Thm1_i, 0.6);
  r.allow_conjectural = true;
  const auto rep = check_sum(r, f, v);
  EXPECT_TRUE(rep.conjectural);
  EXPECT_FALSE(rep.constant.guaranteed);
}

TEST(Report, VacuousViolation) {
  const GridSpec g = dirichlet(2.0, 3);
  SampledPotential v{g, {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}};
  FilteredSpectrum f;
  f.kept = {{-1.0, 0.0}};
  const auto rep = check_sum(request(Which::Thm1_i), f, v);
  EXPECT_TRUE(std::isinf(rep.ratio));
  EXPECT_TRUE(rep.vacuous_violation);
  EXPECT_FALSE(rep.satisfied);
  const auto j = rep.to_json();
  EXPECT_TRUE(j["ratio"].is_null());
  for (const char* key : {"which", "gamma", "kappa", "alpha", "refined", "constant_mode", "constant", "lhs", "rhs",
                          "ratio", "satisfied", "slack", "eigenvalues_used"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(CheckSingle, DaviesOnLatticeDeltaStaysBelowOne) {
  // One-site well of weight c: |E| = (sqrt(4 + c^2 h^2) - 2)/h^2 < c^2/4. The
  // walls are many decay lengths away.
  for (double c : {2.0, 4.0, 10.0}) {
    const GridSpec g = dirichlet(15.0, 1501);
    SampledPotential v{g, std::vector<cplx>(1501, cplx{})};
    const double h = g.mesh();
    v.values[750] = -c / h;
    const auto f = solve_and_filter(build_operator(g, v, Kinetic::Laplacian), FilterPolicy{});
    ASSERT_EQ(f.kept.size(), 1u) << c;
    const double expected = -(std::sqrt(4.0 + c * c * h * h) - 2.0) / (h * h);
    EXPECT_NEAR(f.kept[0].real(), expected, 1e-6 * std::abs(expected));
    const auto rep = check_single(f.kept[0], request(Which::Davies2), v);
    EXPECT_LT(rep.ratio, 1.0);
    EXPECT_GT(rep.ratio, 0.9);
  }
}

TEST(CheckSingle, Preconditions) {
  const GridSpec g = dirichlet(2.0, 3);
  SampledPotential v{g, {{-1.0, 0.0}, {-1.0, 0.0}, {-1.0, 0.0}}};
  EXPECT_THROW(check_single({1.0, 1.0}, request(Which::Single_10), v), DomainError);
  EXPECT_THROW(check_single({-1.0, 1.0}, request(Which::Single_11), v), DomainError);
  EXPECT_THROW(check_single({1.0, 0.0}, request(Which::Davies2), v), DomainError);
  EXPECT_THROW(check_single({-1.0, 0.0}, request(Which::Thm1_i), v), DomainError);
  EXPECT_TRUE(single_applies(Which::Single_11, {0.0, 1.0}, 1));
  EXPECT_FALSE(single_applies(Which::Davies2, {-1.0, 0.0}, 2));
}

TEST(CheckSingle, HandComputedValues) {
  const GridSpec g = dirichlet(2.0, 3);
  SampledPotential v{g, {{-1.0, 0.0}, {-3.0, 4.0}, {0.0, 0.0}}};
  auto r = request(Which::Single_11, 1.0);
  r.constant_mode = ConstantMode::unit();
  const cplx mu{1.0, 2.0};
  const auto rep = check_single(mu, r, v);
  const double p = 1.5;
  const double expected_rhs = std::pow(2.0, 0.75) * std::pow(2.0, p) * (1.0 + std::pow(5.0, p));
  EXPECT_NEAR(rep.rhs, expected_rhs, 1e-12 * expected_rhs);
  EXPECT_NEAR(rep.lhs, std::sqrt(5.0), 1e-15);

  r.which = Which::Davies2;
  const auto d = check_single({-3.0, 0.0}, r, v);
  EXPECT_DOUBLE_EQ(d.rhs, 0.25 * 36.0);
}

TEST(ElementaryInequality, RandomPairs) {
  std::mt19937_64 rng(31);
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < 10000; ++i) EXPECT_TRUE(elementary_inequality_holds(e(rng), e(rng)));
  EXPECT_TRUE(elementary_inequality_holds(1.0, 1.0));
  EXPECT_TRUE(elementary_inequality_holds(0.0, 3.0));
  EXPECT_THROW(elementary_inequality_holds(-1.0, 1.0), DomainError);
}

}  // namespace
}  // namespace ltlab
