#include "cub/pipeline.hpp"

#include "cub/error.hpp"
#include "cub/io.hpp"

namespace cub {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config must be a JSON object");
  PipelineConfig cfg;
  try {
    if (j.contains("vocabulary")) cfg.vocabulary_path = resolve(base_dir, j["vocabulary"].get<std::string>());
    if (j.contains("rulebase")) cfg.rulebase_path = resolve(base_dir, j["rulebase"].get<std::string>());
    cfg.rule_count = j.value("rule_count", cfg.rule_count);
    cfg.output_terms = j.value("output_terms", cfg.output_terms);
    cfg.grid_points = j.value("grid_points", cfg.grid_points);
    if (j.contains("fcm")) {
      const auto& f = j["fcm"];
      const auto mode = f.value("mode", std::string("seeded"));
      if (mode == "seeded") {
        cfg.fcm.mode = FcmMode::SeededIteration;
      } else if (mode == "fixed") {
        cfg.fcm.mode = FcmMode::FixedCenters;
      } else {
        throw Error(ErrorCode::Parse, "fcm.mode must be 'seeded' or 'fixed'");
      }
      cfg.fcm.fuzzifier = f.value("m", cfg.fcm.fuzzifier);
      cfg.fcm.tolerance = f.value("tolerance", cfg.fcm.tolerance);
      cfg.fcm.max_iterations = f.value("max_iterations", cfg.fcm.max_iterations);
    }
    if (j.contains("groups")) cfg.groups = GroupSpec{j["groups"].get<std::vector<int>>()};
    cfg.group_size = j.value("group_size", cfg.group_size);
    cfg.perturbation_swaps = j.value("perturbation_swaps", cfg.perturbation_swaps);
    cfg.no_repeat_pairs = j.value("no_repeat_pairs", cfg.no_repeat_pairs);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("out")) cfg.out_dir = resolve(base_dir, j["out"].get<std::string>());
    const auto cost = j.value("cost_mode", std::string("labels"));
    if (cost == "labels") {
      cfg.cost_mode = CostMode::LabelRepresentatives;
    } else if (cost == "raw") {
      cfg.cost_mode = CostMode::RawCoefficients;
    } else {
      throw Error(ErrorCode::Parse, "cost_mode must be 'labels' or 'raw'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  if (cfg.group_size < 1) throw Error(ErrorCode::Parse, "config: group_size must be positive");
  if (cfg.perturbation_swaps < 1) throw Error(ErrorCode::Parse, "config: perturbation_swaps must be positive");
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_json_file(path), path.parent_path());
}

GroupSpec resolve_group_spec(const PipelineConfig& cfg, std::size_t roster_size) {
  if (cfg.groups) return *cfg.groups;
  const auto size = static_cast<std::size_t>(cfg.group_size);
  const std::size_t count = std::max<std::size_t>(2, (roster_size + size - 1) / size);
  GroupSpec spec;
  for (std::size_t g = 0; g < count; ++g) {
    spec.sizes.push_back(static_cast<int>(roster_size / count + (g < roster_size % count ? 1 : 0)));
  }
  return spec;
}

SurveyVocabulary resolve_vocabulary(const PipelineConfig& cfg) {
  auto vocab = cfg.vocabulary_path ? load_vocabulary(cfg.vocabulary_path->string()) : default_vocabulary();
  validate_vocabulary(vocab, cfg.rule_count);
  return vocab;
}

RuleBase resolve_rulebase(const PipelineConfig& cfg, const SurveyVocabulary& vocab) {
  const auto sizes = vocab.sizes();
  if (cfg.rulebase_path) return load_rulebase(cfg.rulebase_path->string(), sizes, cfg.output_terms);
  return build_default_rulebase(sizes, cfg.output_terms);
}

std::vector<StudentCoefficients> evaluate_roster(const Roster& roster, const SurveyVocabulary& vocab,
                                                 const RuleBase& rb, Eigen::Index grid_points) {
  std::vector<StudentCoefficients> out;
  out.reserve(roster.size());
  for (const auto& e : roster.entries) {
    out.push_back({e.student_id, evaluate_student(e, vocab, rb, grid_points)});
  }
  return out;
}

LabelingResult label_students(const std::vector<StudentCoefficients>& coeffs,
                              const ClusterModel<double>& model) {
  if (coeffs.empty()) throw Error(ErrorCode::EmptyRoster, "no students to cluster");
  PointMatrix<double> points(static_cast<Eigen::Index>(coeffs.size()), 2);
  std::vector<std::string> ids;
  ids.reserve(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    points(static_cast<Eigen::Index>(i), 0) = coeffs[i].coefficients.distractibility;
    points(static_cast<Eigen::Index>(i), 1) = coeffs[i].coefficients.disruptiveness;
    ids.push_back(coeffs[i].student_id);
  }
  LabelingResult r;
  r.fcm = fcm_fit(points, model);
  r.clusters = assign_clusters(r.fcm.memberships, ids);
  r.labeled = classify(r.clusters, coeffs);
  return r;
}

}  // namespace cub
