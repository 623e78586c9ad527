#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cub/assign.hpp"
#include "cub/evaluate.hpp"
#include "cub/pipeline.hpp"
#include "cub/survey.hpp"
#include "oracles.hpp"

namespace cub {
namespace {

std::vector<RotationOutcome> run(const GroupingProblem& problem, std::uint64_t seed, int total,
                                 bool no_repeat, int k = 3) {
  std::vector<RotationOutcome> seq{initial_arrangement(problem, seed, k, no_repeat)};
  while (static_cast<int>(seq.size()) < total) seq.push_back(next_arrangement(seq.back().state, problem));
  return seq;
}

class Rotation : public ::testing::Test {
 protected:
  std::vector<LabeledStudent> roster = []() {
    std::mt19937_64 rng(2024);
    return oracle::random_roster(rng, 25);
  }();
  GroupSpec spec{{5, 5, 5, 5, 5}};
};

TEST_F(Rotation, TenDistinctArrangements) {
  const GroupingProblem problem(roster, spec, default_cost_model());
  const auto seq = run(problem, 42, 10, false);
  std::set<std::string> keys;
  for (const auto& s : seq) keys.insert(canonical_key(s.arrangement.groups));
  EXPECT_EQ(keys.size(), 10u);
  const auto& final_state = seq.back().state;
  ASSERT_EQ(final_state.history.size(), 10u);
  ASSERT_EQ(final_state.objectives.size(), 10u);
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_EQ(final_state.history[t], canonicalize(seq[t].arrangement.groups));
    EXPECT_NEAR(seq[t].arrangement.objective,
                arrangement_objective(seq[t].arrangement.groups, roster, default_cost_model()), 1e-9);
    problem.partition_of(seq[t].arrangement.groups);  // exact partition matching the group sizes
  }
}

TEST_F(Rotation, FirstArrangementIsGreedyPlusSwaps) {
  const GroupingProblem problem(roster, spec, default_cost_model());
  const auto first = initial_arrangement(problem, 1, 3, false);
  EXPECT_EQ(first.arrangement.groups,
            problem.groups_of(improve_swaps(problem, sequential_construct(problem))));
}

TEST_F(Rotation, NoRepeatPairsSplitsPreviousGroups) {
  for (const auto& cm : {default_cost_model(), default_cost_model(CostMode::RawCoefficients)}) {
    const GroupingProblem problem(roster, spec, cm);
    const auto seq = run(problem, 42, 10, true);
    for (std::size_t t = 1; t < seq.size(); ++t) {
      EXPECT_FALSE(seq[t].relaxed_no_repeat) << "rotation " << t;
      EXPECT_EQ(compare(seq[t - 1].arrangement.groups, seq[t].arrangement.groups).shared_pairs, 0u)
          << "rotation " << t;
    }
  }
}

TEST_F(Rotation, ReproducibleFromSeed) {
  const GroupingProblem problem(roster, spec, default_cost_model(CostMode::RawCoefficients));
  for (bool no_repeat : {false, true}) {
    const auto a = run(problem, 7, 8, no_repeat);
    const auto b = run(problem, 7, 8, no_repeat);
    for (std::size_t t = 0; t < a.size(); ++t) EXPECT_EQ(a[t].arrangement.groups, b[t].arrangement.groups);
    const auto c = run(problem, 8, 8, no_repeat);
    bool differs = false;
    for (std::size_t t = 1; t < a.size(); ++t) differs |= a[t].arrangement.groups != c[t].arrangement.groups;
    EXPECT_TRUE(differs);
  }
}

TEST_F(Rotation, ResumesFromStoredState) {
  const GroupingProblem problem(roster, spec, default_cost_model());
  const auto seq = run(problem, 5, 4, false);
  RotationState copy = seq[2].state;
  EXPECT_EQ(next_arrangement(copy, problem).arrangement.groups, seq[3].arrangement.groups);
}

TEST_F(Rotation, DegradationSeriesOnFixtureRoster) {
  PipelineConfig cfg;
  cfg.vocabulary_path = std::string(CUB_FIXTURE_DIR) + "/vocabulary.json";
  const auto vocab = resolve_vocabulary(cfg);
  std::ifstream in(std::string(CUB_FIXTURE_DIR) + "/survey_25.csv");
  const auto coeffs = evaluate_roster(parse_survey(in, vocab), vocab, resolve_rulebase(cfg, vocab), cfg.grid_points);
  const auto labeled = label_students(coeffs, cfg.fcm).labeled;
  const GroupingProblem problem(labeled, spec, default_cost_model());
  const auto seq = run(problem, 42, 18, false);
  const double first = seq.front().arrangement.objective;
  EXPECT_EQ(degradation_ratio(first, first), 1.0);
  for (const auto& s : seq) EXPECT_GE(degradation_ratio(s.arrangement.objective, first), 1.0 - 1e-12);
}

TEST_F(Rotation, LaterArrangementsAreSwapLocalOptimaUnderDistinctness) {
  const GroupingProblem problem(roster, spec, default_cost_model());
  const auto seq = run(problem, 42, 6, false);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const auto& groups = seq[t].arrangement.groups;
    std::set<std::string> earlier;
    for (std::size_t u = 0; u < t; ++u) earlier.insert(canonical_key(seq[u].arrangement.groups));
    for (std::size_t ga = 0; ga < groups.size(); ++ga)
      for (std::size_t gb = ga + 1; gb < groups.size(); ++gb)
        for (std::size_t a = 0; a < groups[ga].size(); ++a)
          for (std::size_t b = 0; b < groups[gb].size(); ++b) {
            auto g = groups;
            std::swap(g[ga][a], g[gb][b]);
            if (earlier.count(canonical_key(canonicalize(g)))) continue;
            EXPECT_GE(arrangement_objective(g, roster, default_cost_model()),
                      seq[t].arrangement.objective - 1e-12);
          }
  }
}

TEST(RotationSmall, ExhaustsThreeStudentRoster) {
  const std::vector<LabeledStudent> roster{{"A", {1, Association::High}, {0.1, 0.2}, 1.0},
                                           {"B", {2, Association::High}, {0.8, 0.2}, 1.0},
                                           {"C", {3, Association::High}, {0.8, 0.8}, 1.0}};
  const GroupingProblem problem(roster, {{2, 1}}, default_cost_model());
  auto step = initial_arrangement(problem, 42, 3, false);
  step = next_arrangement(step.state, problem);
  step = next_arrangement(step.state, problem);
  std::set<std::string> keys;
  for (const auto& g : step.state.history) keys.insert(canonical_key(g));
  EXPECT_EQ(keys.size(), 3u);
  try {
    next_arrangement(step.state, problem);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExhaustedRetries);
    EXPECT_NE(std::string(e.what()).find("too small"), std::string::npos);
  }
}

TEST(RotationSmall, RelaxesImpossibleNoRepeat) {
  // A group of 3 out of 4 always re-pairs two of the previous trio.
  std::mt19937_64 rng(1);
  const auto roster = oracle::random_roster(rng, 4);
  const GroupingProblem problem(roster, {{3, 1}}, default_cost_model(CostMode::RawCoefficients));
  const auto first = initial_arrangement(problem, 42, 1, true);
  const auto next = next_arrangement(first.state, problem);
  EXPECT_TRUE(next.relaxed_no_repeat);
  EXPECT_NE(canonical_key(next.arrangement.groups), canonical_key(first.arrangement.groups));
}

TEST(RotationSmall, RejectsEmptyHistory) {
  std::mt19937_64 rng(1);
  const auto roster = oracle::random_roster(rng, 4);
  EXPECT_THROW(next_arrangement(RotationState{}, roster, {{2, 2}}, default_cost_model()), Error);
}

TEST(DegradationRatio, ZeroBaseline) {
  EXPECT_EQ(degradation_ratio(0.0, 0.0), 1.0);
  EXPECT_TRUE(std::isinf(degradation_ratio(1.0, 0.0)));
  EXPECT_DOUBLE_EQ(degradation_ratio(3.0, 2.0), 1.5);
}

}  // namespace
}  // namespace cub
