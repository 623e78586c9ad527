#include "cub/fis.hpp"

#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace cub {
namespace {

const std::array<std::size_t, 3> kDefaultSizes{7, 7, 9};

TEST(RuleBase, DefaultHas441CompleteRules) {
  const auto rb = build_default_rulebase(kDefaultSizes, 5);
  ASSERT_EQ(rb.rules().size(), 441u);
  std::set<std::array<std::size_t, 3>> seen;
  for (const auto& r : rb.rules()) seen.insert(r.antecedent);
  EXPECT_EQ(seen.size(), 441u);
}

TEST(RuleBase, ExtremeConsequents) {
  const auto rb = build_default_rulebase(kDefaultSizes, 5);
  EXPECT_EQ(rb.rule_for(0, 0, 0).consequent, (std::array<std::size_t, 2>{0, 0}));
  EXPECT_EQ(rb.rule_for(6, 6, 8).consequent, (std::array<std::size_t, 2>{4, 4}));
}

TEST(RuleBase, ConsequentsMatchFormula) {
  for (auto sizes : {kDefaultSizes, std::array<std::size_t, 3>{3, 7, 21},
                     std::array<std::size_t, 3>{2, 2, 2}}) {
    for (std::size_t out : {2u, 3u, 5u, 7u}) {
      const auto rb = build_default_rulebase(sizes, out);
      for (const auto& r : rb.rules()) {
        const auto [i, j, k] = r.antecedent;
        EXPECT_EQ(r.consequent[0], oracle::consequent(j, sizes[1], k, sizes[2], out));
        EXPECT_EQ(r.consequent[1], oracle::consequent(i, sizes[0], k, sizes[2], out));
      }
    }
  }
}

TEST(RuleBase, InvalidSizes) {
  EXPECT_THROW(build_default_rulebase({1, 7, 9}, 5), Error);
  EXPECT_THROW(build_default_rulebase(kDefaultSizes, 1), Error);
}

TEST(RuleBase, JsonLoaderEnforcesCompleteness) {
  std::string json = "[";
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        json += (json.size() > 1 ? "," : "");
        json += "{\"if\":[" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                "],\"then\":[" + std::to_string(j) + "," + std::to_string(i) + "]}";
      }
  std::istringstream ok(json + "]");
  const auto rb = parse_rulebase_json(ok, {2, 2, 2}, 2);
  EXPECT_EQ(rb.rule_for(0, 1, 0).consequent, (std::array<std::size_t, 2>{1, 0}));

  std::istringstream missing(R"([{"if":[0,0,0],"then":[0,0]}])");
  try {
    parse_rulebase_json(missing, {2, 2, 2}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompleteRuleBase);
  }
  std::istringstream dup(json + R"(,{"if":[0,0,0],"then":[1,1]}])");
  EXPECT_THROW(parse_rulebase_json(dup, {2, 2, 2}, 2), Error);
  std::istringstream range(R"([{"if":[0,0,5],"then":[0,0]}])");
  EXPECT_THROW(parse_rulebase_json(range, {2, 2, 2}, 2), Error);
}

TEST(TriangularMF, RejectsDegenerate) {
  EXPECT_THROW(TriangularMF<double>(0.5, 0.5, 0.5), Error);
  EXPECT_THROW(TriangularMF<double>(0.6, 0.5, 0.7), Error);
}

TEST(Fuzzify, PeakMidwayAndDerivedPoint) {
  const auto var = LinguisticVariable<double>::uniform("x", 7);
  const Eigen::ArrayXd at_peak = fuzzify(2.0 / 6.0, var);
  EXPECT_DOUBLE_EQ(at_peak(2), 1.0);
  EXPECT_DOUBLE_EQ(at_peak.sum(), 1.0);

  const Eigen::ArrayXd midway = fuzzify(2.5 / 6.0, var);
  EXPECT_NEAR(midway(2), 0.5, 1e-12);
  EXPECT_NEAR(midway(3), 0.5, 1e-12);

  // 1 - |0.1 - b| * 6 for the two neighbouring peaks.
  const Eigen::ArrayXd mu = fuzzify(0.1, var);
  EXPECT_NEAR(mu(0), 0.4, 1e-12);
  EXPECT_NEAR(mu(1), 0.6, 1e-12);
  EXPECT_EQ((mu.segment(2, 5) == 0.0).count(), 5);

  EXPECT_THROW(fuzzify(1.01, var), Error);
  EXPECT_THROW(fuzzify(-0.01, var), Error);
}

TEST(Fuzzify, CoverageEverywhere) {
  for (std::size_t n : {2u, 5u, 7u, 9u}) {
    const auto var = LinguisticVariable<float>::uniform("x", n);
    for (int s = 0; s <= 1000; ++s) {
      EXPECT_GT(fuzzify(static_cast<float>(s) / 1000.0f, var).sum(), 0.0f);
    }
  }
}

TEST(Infer, PeakInputsFireExactlyOneRule) {
  const auto rb = build_default_rulebase(kDefaultSizes, 5);
  const CrispInputs in{3.0 / 6.0, 1.0 / 6.0, 5.0 / 8.0};
  const Eigen::ArrayXd w = firing_strengths(rb, in);
  EXPECT_EQ((w > 0.0).count(), 1);
  EXPECT_DOUBLE_EQ(w.maxCoeff(), 1.0);

  const auto& rule = rb.rule_for(3, 1, 5);
  const auto res = infer(rb, in);
  const Eigen::ArrayXd expected = rb.outputs()[0].terms[rule.consequent[0]].sample(res.distractibility.grid);
  EXPECT_TRUE(res.distractibility.mu.isApprox(expected));
}

TEST(Infer, AtMostEightRulesFireBetweenPeaks) {
  const auto rb = build_default_rulebase(kDefaultSizes, 5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const CrispInputs in{u(rng), u(rng), u(rng)};
    EXPECT_LE((firing_strengths(rb, in) > 0.0).count(), 8);
    const auto res = infer(rb, in);
    EXPECT_GT(res.distractibility.height(), 0.0);
    EXPECT_GT(res.disruptiveness.height(), 0.0);
  }
}

TEST(Infer, MatchesRuleByRuleOracle) {
  const auto rb = build_default_rulebase(kDefaultSizes, 5);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::array<double, 3> x{u(rng), u(rng), u(rng)};
    const auto res = infer(rb, {x[0], x[1], x[2]});
    const auto expect = oracle::mamdani(x, kDefaultSizes, 5, 201);
    EXPECT_NEAR(defuzzify_centroid(res.distractibility), expect[0], 1e-12);
    EXPECT_NEAR(defuzzify_centroid(res.disruptiveness), expect[1], 1e-12);
  }
}

TEST(Defuzzify, SymmetricSetsCenterAtHalf) {
  auto s = SampledSet<double>::zeros(201);
  s.mu = TriangularMF<double>(0.25, 0.5, 0.75).sample(s.grid);
  EXPECT_NEAR(defuzzify_centroid(s), 0.5, 1e-12);
  s.mu = (s.grid - 0.5).abs();
  EXPECT_NEAR(defuzzify_centroid(s), 0.5, 1e-12);
}

TEST(Defuzzify, ClippedTriangleAgainstQuadrature) {
  const TriangularMF<double> tri(0.0, 0.25, 0.5);
  const double continuous = oracle::centroid_quadrature(
      [&](double x) { return std::min(0.5, oracle::triangle(x, 0.0, 0.25, 0.5)); }, 0.0, 1.0, 1'000'000);
  EXPECT_NEAR(continuous, 0.25, 1e-9);
  auto s = SampledSet<double>::zeros(201);
  s.mu = tri.sample(s.grid).min(0.5);
  EXPECT_NEAR(defuzzify_centroid(s), continuous, 1e-9);
}

TEST(Defuzzify, ZeroArea) {
  const auto s = SampledSet<double>::zeros(11);
  try {
    defuzzify_centroid(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroArea);
  }
}

class EvaluateStudent : public ::testing::Test {
 protected:
  SurveyVocabulary vocab = default_vocabulary();
  RuleBase rb = build_default_rulebase(kDefaultSizes, 5);

  Coefficients at(std::size_t i, std::size_t j, std::size_t k, Eigen::Index grid = kDefaultGridPoints) const {
    const SurveyEntry e{"x", vocab.noise.terms()[i], vocab.focus.terms()[j], vocab.seated.terms()[k]};
    return evaluate_student(e, vocab, rb, grid);
  }

  double term_centroid(std::size_t t) const {
    auto s = SampledSet<double>::zeros(kDefaultGridPoints);
    s.mu = rb.outputs()[0].terms[t].sample(s.grid);
    return defuzzify_centroid(s);
  }
};

TEST_F(EvaluateStudent, BestAndWorstStudents) {
  const auto best = at(0, 0, 0);
  EXPECT_DOUBLE_EQ(best.distractibility, best.disruptiveness);
  EXPECT_DOUBLE_EQ(best.distractibility, term_centroid(0));
  EXPECT_LT(best.distractibility, 0.1);

  const auto worst = at(6, 6, 8);
  EXPECT_DOUBLE_EQ(worst.distractibility, worst.disruptiveness);
  EXPECT_DOUBLE_EQ(worst.distractibility, term_centroid(4));
  EXPECT_GT(worst.distractibility, 0.9);
}

TEST_F(EvaluateStudent, QuietButUnfocusedAndRestless) {
  const auto c = at(0, 6, 8);
  EXPECT_LT(c.disruptiveness, c.distractibility);
}

TEST_F(EvaluateStudent, MonotoneInEveryAnswer) {
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t k = 0; k < 9; ++k) {
        const auto base = at(i, j, k);
        EXPECT_GE(base.distractibility, 0.0);
        EXPECT_LE(base.distractibility, 1.0);
        EXPECT_GE(base.disruptiveness, 0.0);
        EXPECT_LE(base.disruptiveness, 1.0);
        const std::array<std::array<std::size_t, 3>, 3> worse{{{i + 1, j, k}, {i, j + 1, k}, {i, j, k + 1}}};
        for (const auto& w : worse) {
          if (w[0] > 6 || w[1] > 6 || w[2] > 8) continue;
          const auto next = at(w[0], w[1], w[2]);
          EXPECT_GE(next.distractibility, base.distractibility - 1e-9);
          EXPECT_GE(next.disruptiveness, base.disruptiveness - 1e-9);
        }
      }
}

TEST_F(EvaluateStudent, GridResolutionStable) {
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t k = 0; k < 9; ++k) {
        const auto coarse = at(i, j, k, 201);
        const auto fine = at(i, j, k, 401);
        EXPECT_LE(std::abs(coarse.distractibility - fine.distractibility), 5e-3);
        EXPECT_LE(std::abs(coarse.disruptiveness - fine.disruptiveness), 5e-3);
      }
}

TEST_F(EvaluateStudent, VocabularyMustMatchRuleBase) {
  const auto small = build_default_rulebase({2, 2, 2}, 5);
  const SurveyEntry e{"x", "Silent", "Always focused", "Always seated"};
  EXPECT_THROW(evaluate_student(e, vocab, small), Error);
}

}  // namespace
}  // namespace cub
