#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "intgc/filtration.hpp"
#include "intgc/parser.hpp"
#include "intgc/search.hpp"
#include "support/generators.hpp"

namespace intgc {
namespace {

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet rendered(const FormulaPairs& pairs) {
  PairSet out;
  for (const auto& [a, b] : pairs) out.emplace(render(a), render(b));
  return out;
}

// Oracle: enumerate the []-headed (resp. <>-headed) members of Sigma up to a
// fixed prefix depth and normalise the resulting pairs.
PairSet box_pairs_by_enumeration(const ClosureBasis& b, std::size_t layers) {
  PairSet out;
  for (const auto& f : testing::sigma_prefix_members(b, layers))
    if (f.is(Op::Down)) out.emplace(render(normalize(f)), render(normalize(f.child())));
  for (const auto& f : b.sub)
    if (f.is(Op::Down)) out.emplace(render(normalize(f)), render(normalize(f.child())));
  return out;
}

PairSet diamond_pairs_by_enumeration(const ClosureBasis& b, std::size_t layers) {
  PairSet out;
  for (const auto& f : testing::sigma_prefix_members(b, layers))
    if (f.is(Op::Up)) out.emplace(render(normalize(f.child())), render(normalize(f)));
  for (const auto& f : b.sub)
    if (f.is(Op::Up)) out.emplace(render(normalize(f.child())), render(normalize(f)));
  return out;
}

std::vector<bool> bits(std::initializer_list<int> v) {
  std::vector<bool> out;
  for (int b : v) out.push_back(b != 0);
  return out;
}

TEST(Signature, WorkedModel) {
  const auto m = testing::worked_model();
  const auto b = closure_basis(parse("[]p -> p"));
  EXPECT_EQ(signature(m, 0, b), bits({0, 1, 0, 0}));
  EXPECT_EQ(signature(m, 1, b), bits({1, 1, 1, 1}));
  EXPECT_EQ(signature(m, 1, closure_basis(parse("p"))), bits({1}));
  EXPECT_THROW(signature(m, 7, b), UnknownWorld);
}

TEST(RfPairBasis, Examples) {
  EXPECT_EQ(rendered(rf_pair_basis(closure_basis(parse("[]p -> p")))),
            (PairSet{{"[]p", "p"}, {"[]p", "<>[]p"}}));
  EXPECT_EQ(rendered(rf_pair_basis(closure_basis(parse("<>p")))), (PairSet{{"[]<>p", "<>p"}}));
  EXPECT_TRUE(rf_pair_basis(closure_basis(parse("p & !q"))).empty());
}

TEST(RfPairBasisAlt, Examples) {
  EXPECT_EQ(rendered(rf_pair_basis_alt(closure_basis(parse("[]p -> p")))), (PairSet{{"[]p", "<>[]p"}}));
  EXPECT_EQ(rendered(rf_pair_basis_alt(closure_basis(parse("<>p")))), (PairSet{{"p", "<>p"}, {"[]<>p", "<>p"}}));
  EXPECT_TRUE(rf_pair_basis_alt(closure_basis(parse("p -> q"))).empty());
}

TEST(RfPairBasis, MatchesSigmaEnumeration) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto b = closure_basis(testing::random_formula(rng, 4, {"p", "q"}));
    const auto p = rendered(rf_pair_basis(b));
    const auto q = rendered(rf_pair_basis_alt(b));
    ASSERT_EQ(p, box_pairs_by_enumeration(b, 3)) << render(b.root);
    ASSERT_EQ(q, diamond_pairs_by_enumeration(b, 3)) << render(b.root);
    // the enumeration has stabilised
    ASSERT_EQ(box_pairs_by_enumeration(b, 3), box_pairs_by_enumeration(b, 5));
    ASSERT_LE(p.size(), 3 * b.gamma.size());
    for (const auto& [x, y] : rf_pair_basis(b)) {
      ASSERT_TRUE(b.gamma.contains(x));
      ASSERT_TRUE(b.gamma.contains(y));
    }
  }
}

TEST(BuildFiltration, WorkedExample) {
  const auto f = build_filtration(testing::worked_model(), parse("[]p -> p"));
  ASSERT_EQ(f.classes.size(), 2u);
  EXPECT_EQ(f.classes[0], bits({0, 1, 0, 0}));
  EXPECT_EQ(f.classes[1], bits({1, 1, 1, 1}));
  EXPECT_EQ(f.class_of, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(f.leq_f, testing::matrix(2, {{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(f.r_f, testing::matrix(2, {{1, 0}, {1, 1}}));
  EXPECT_EQ(f.v_f.at("p").members(), (std::vector<std::size_t>{1}));

  const auto report = verify_filtration(f);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.checks.size(), 5u);
  EXPECT_FALSE(satisfies(f.quotient(), f.class_of[0], parse("[]p -> p")));
}

TEST(BuildFiltration, SingleWorld) {
  KripkeModel m{KripkeFrame{{"a"}, BitMatrix::identity(1), BitMatrix(1)}, {}};
  m.valuation.emplace("p", WorldSet::full(1));
  const auto f = build_filtration(m, parse("p"));
  EXPECT_EQ(f.classes.size(), 1u);
  EXPECT_TRUE(verify_filtration(f).passed());
}

TEST(BuildFiltration, RejectsInvalidModel) {
  auto m = testing::worked_model();
  m.frame.leq.set(1, 0);  // b <= a requires a R a
  EXPECT_THROW(build_filtration(m, parse("p")), ModelError);
}

TEST(VerifyFiltration, DetectsBrokenQuotient) {
  auto f = build_filtration(testing::worked_model(), parse("[]p -> p"));
  f.r_f.set(0, 0);  // [a] Rf [a] is not justified by the pairs
  const auto report = verify_filtration(f);
  EXPECT_FALSE(report.passed());
  const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                               [](const auto& c) { return c.name == "alternative_rf"; });
  ASSERT_NE(it, report.checks.end());
  EXPECT_FALSE(it->passed);
}

class FiltrationProperties : public ::testing::Test {
protected:
  std::mt19937_64 rng{2024};
  RandomModelParams params{1, 8, 0.2, 0.2, 0.3, {"p", "q"}};
};

TEST_F(FiltrationProperties, AllChecksPass) {
  for (int i = 0; i < 200; ++i) {
    const auto m = random_model(params, rng);
    const Formula a = testing::random_formula(rng, 4, {"p", "q"});
    const auto f = build_filtration(m, a);
    const auto report = verify_filtration(f);
    ASSERT_TRUE(report.passed()) << render(a);
    ASSERT_LE(f.classes.size(), m.size());
    // refutations survive
    const WorldSet src = extension(m, a);
    const WorldSet dst = extension(f.quotient(), a);
    for (std::size_t x = 0; x < m.size(); ++x) ASSERT_EQ(src.test(x), dst.test(f.class_of[x]));
  }
}

// Agreement on Gamma implies agreement on every sampled member of Sigma.
TEST_F(FiltrationProperties, SigmaMembersAgreeOnQuotient) {
  for (int i = 0; i < 100; ++i) {
    const auto m = random_model(params, rng);
    const Formula a = testing::random_formula(rng, 3, {"p", "q"});
    const auto f = build_filtration(m, a);
    const auto sigma = testing::sigma_prefix_members(f.basis, 3);
    if (sigma.empty()) continue;
    const auto src = extensions(m, sigma);
    const auto dst = extensions(f.quotient(), sigma);
    for (std::size_t k = 0; k < sigma.size(); ++k)
      for (std::size_t x = 0; x < m.size(); ++x)
        ASSERT_EQ(src[k].test(x), dst[k].test(f.class_of[x])) << render(sigma[k]);
  }
}

TEST_F(FiltrationProperties, RefilteringIsStable) {
  for (int i = 0; i < 100; ++i) {
    const auto m = random_model(params, rng);
    const Formula a = testing::random_formula(rng, 4, {"p", "q"});
    const auto f = build_filtration(m, a);
    const auto g = build_filtration(f.quotient(), a);
    ASSERT_EQ(g.classes, f.classes);
    ASSERT_EQ(g.leq_f, f.leq_f);
    ASSERT_EQ(g.r_f, f.r_f);
    for (std::size_t c = 0; c < f.classes.size(); ++c) ASSERT_EQ(g.class_of[c], c);
  }
}

}  // namespace
}  // namespace intgc
