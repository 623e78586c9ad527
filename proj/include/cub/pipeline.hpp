#ifndef CUB_PIPELINE_HPP
#define CUB_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cub/assign.hpp"
#include "cub/classify.hpp"
#include "cub/fcm.hpp"
#include "cub/fis.hpp"
#include "cub/survey.hpp"

namespace cub {

/// Run configuration. Every field has a default; a JSON config file sets any
/// subset, and command-line flags override both.
struct PipelineConfig {
  std::optional<std::filesystem::path> vocabulary_path;
  std::optional<std::filesystem::path> rulebase_path;
  std::size_t rule_count = kDefaultRuleCount;
  std::size_t output_terms = kDefaultOutputTerms;
  Eigen::Index grid_points = kDefaultGridPoints;
  ClusterModel<double> fcm;
  std::optional<GroupSpec> groups;
  int group_size = 5;  // used when `groups` is absent
  int perturbation_swaps = 3;
  bool no_repeat_pairs = false;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
  CostMode cost_mode = CostMode::LabelRepresentatives;
};

/// Relative paths inside the file resolve against `base_dir`.
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Explicit group sizes when configured, otherwise near-equal groups of about
/// `group_size` (never fewer than 2 groups).
GroupSpec resolve_group_spec(const PipelineConfig& cfg, std::size_t roster_size);

SurveyVocabulary resolve_vocabulary(const PipelineConfig& cfg);
RuleBase resolve_rulebase(const PipelineConfig& cfg, const SurveyVocabulary& vocab);

std::vector<StudentCoefficients> evaluate_roster(const Roster& roster, const SurveyVocabulary& vocab,
                                                 const RuleBase& rb,
                                                 Eigen::Index grid_points = kDefaultGridPoints);

struct LabelingResult {
  FcmResult<double> fcm;
  std::vector<ClusterAssignment> clusters;
  std::vector<LabeledStudent> labeled;
};

/// FCM in the (D, d) plane followed by High/Low classification.
LabelingResult label_students(const std::vector<StudentCoefficients>& coeffs,
                              const ClusterModel<double>& model);

}  // namespace cub

#endif  // CUB_PIPELINE_HPP
