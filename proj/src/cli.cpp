#include "cub/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cub/error.hpp"
#include "cub/evaluate.hpp"
#include "cub/io.hpp"
#include "cub/pipeline.hpp"

namespace cub {

namespace fs = std::filesystem;

namespace {

constexpr const char* kStateFile = "rotation_state.json";

// Exclusive advisory lock on `<state>.lock`, held for the lifetime of the object.
class StateLock {
 public:
  explicit StateLock(const fs::path& state) : path_(state.string() + ".lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::Io, "cannot open lock file '" + path_ + "'");
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::Io, "rotation state '" + state.string() + "' is locked by another process");
    }
  }
  StateLock(const StateLock&) = delete;
  StateLock& operator=(const StateLock&) = delete;
  ~StateLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  std::string path_;
  int fd_ = -1;
};

std::string arrangement_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "arrangement_%02zu", index);
  return buf;
}

void write_arrangement(const fs::path& dir, const Arrangement& arr, std::size_t index) {
  const auto stem = arrangement_stem(index);
  io::write_file_atomic(dir / (stem + ".json"), io::arrangement_to_json(arr, index).dump(2) + "\n");
  io::write_file_atomic(dir / (stem + ".txt"), io::arrangement_table(arr, index));
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

Roster read_survey(const fs::path& path, const SurveyVocabulary& vocab) {
  std::istringstream in(io::read_file(path));
  return parse_survey(in, vocab);
}

std::vector<StudentCoefficients> coefficients_from(const fs::path& input, const PipelineConfig& cfg) {
  const std::string text = io::read_file(input);
  std::istringstream in(text);
  std::string first;
  std::getline(in, first);
  if (detail::trim(first).rfind("student_id,D,d", 0) == 0) {
    in.clear();
    in.seekg(0);
    return io::read_coefficients_csv(in);
  }
  const auto vocab = resolve_vocabulary(cfg);
  const auto rb = resolve_rulebase(cfg, vocab);
  std::istringstream survey(text);
  return evaluate_roster(parse_survey(survey, vocab), vocab, rb, cfg.grid_points);
}

struct Stage {
  LabelingResult labels;
  GroupSpec spec;
};

Stage label_and_check(const std::vector<StudentCoefficients>& coeffs, const PipelineConfig& cfg) {
  Stage s;
  s.spec = resolve_group_spec(cfg, coeffs.size());
  s.spec.validate(coeffs.size());
  s.labels = label_students(coeffs, cfg.fcm);
  return s;
}

void write_stage_outputs(const fs::path& dir, const Stage& s) {
  io::write_file_atomic(dir / "clusters.csv",
                        render([&](std::ostream& os) { io::write_clusters_csv(os, s.labels.clusters); }));
  io::write_file_atomic(dir / "labels.csv",
                        render([&](std::ostream& os) { io::write_labels_csv(os, s.labels.labeled); }));
}

void write_state(const fs::path& path, const RotationState& state, const Stage& s,
                 const PipelineConfig& cfg) {
  io::RotationFile f{state, s.labels.labeled, s.spec, cfg.cost_mode};
  io::write_file_atomic(path, io::rotation_to_json(f).dump(2) + "\n");
}

int cmd_evaluate(const fs::path& survey, const PipelineConfig& cfg, std::ostream& out) {
  const auto vocab = resolve_vocabulary(cfg);
  const auto rb = resolve_rulebase(cfg, vocab);
  const auto coeffs = evaluate_roster(read_survey(survey, vocab), vocab, rb, cfg.grid_points);
  fs::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / "coefficients.csv";
  io::write_file_atomic(path, render([&](std::ostream& os) { io::write_coefficients_csv(os, coeffs); }));
  out << "wrote " << coeffs.size() << " coefficient rows to " << path.string() << "\n";
  return kExitOk;
}

int cmd_arrange(const fs::path& input, const PipelineConfig& cfg, bool verify, std::ostream& out) {
  const auto coeffs = coefficients_from(input, cfg);
  const Stage s = label_and_check(coeffs, cfg);
  const GroupingProblem problem(s.labels.labeled, s.spec, default_cost_model(cfg.cost_mode));
  std::optional<BruteForceResult> optimum;
  if (verify) optimum = brute_force_optimal(problem);

  fs::create_directories(cfg.out_dir);
  const auto state_path = cfg.out_dir / kStateFile;
  const StateLock lock(state_path);
  const auto first = initial_arrangement(problem, cfg.seed, cfg.perturbation_swaps, cfg.no_repeat_pairs);
  write_stage_outputs(cfg.out_dir, s);
  write_arrangement(cfg.out_dir, first.arrangement, 0);
  write_state(state_path, first.state, s, cfg);
  out << io::arrangement_table(first.arrangement, 0);
  if (optimum) {
    out << "verify: exhaustive optimum " << io::format_number(optimum->best.objective) << " over "
        << optimum->evaluated << " partitions; heuristic/optimum ratio "
        << io::format_number(degradation_ratio(first.arrangement.objective, optimum->best.objective))
        << "\n";
  }
  return kExitOk;
}

int cmd_rotate(const fs::path& state_path, const fs::path& out_dir, std::ostream& out) {
  const StateLock lock(state_path);
  const auto file = io::rotation_from_json(io::read_json_file(state_path));
  const GroupingProblem problem(file.roster, file.spec, default_cost_model(file.cost_mode));
  const auto next = next_arrangement(file.state, problem);
  const std::size_t index = next.state.history.size() - 1;

  fs::create_directories(out_dir);
  write_arrangement(out_dir, next.arrangement, index);
  io::RotationFile updated = file;
  updated.state = next.state;
  io::write_file_atomic(state_path, io::rotation_to_json(updated).dump(2) + "\n");

  out << io::arrangement_table(next.arrangement, index);
  if (next.relaxed_no_repeat) out << "note: no-repeat-pairs constraint relaxed for this arrangement\n";
  out << "degradation ratio: "
      << io::format_number(degradation_ratio(next.arrangement.objective, next.state.objectives.front()))
      << "\n";
  return kExitOk;
}

int cmd_compare(const fs::path& a, const fs::path& b, std::ostream& out) {
  const auto arr_a = io::arrangement_from_json(io::read_json_file(a));
  const auto arr_b = io::arrangement_from_json(io::read_json_file(b));
  out << io::report_to_json(compare(arr_a.groups, arr_b.groups)).dump(2) << "\n";
  return kExitOk;
}

int cmd_pipeline(const fs::path& survey, const PipelineConfig& cfg, int count, std::ostream& out) {
  if (count < 1) throw Error(ErrorCode::InvalidSize, "--count must be at least 1");
  const auto vocab = resolve_vocabulary(cfg);
  const auto rb = resolve_rulebase(cfg, vocab);
  const auto coeffs = evaluate_roster(read_survey(survey, vocab), vocab, rb, cfg.grid_points);
  const Stage s = label_and_check(coeffs, cfg);
  const GroupingProblem problem(s.labels.labeled, s.spec, default_cost_model(cfg.cost_mode));

  fs::create_directories(cfg.out_dir);
  const auto state_path = cfg.out_dir / kStateFile;
  const StateLock lock(state_path);
  io::write_file_atomic(cfg.out_dir / "coefficients.csv",
                        render([&](std::ostream& os) { io::write_coefficients_csv(os, coeffs); }));
  write_stage_outputs(cfg.out_dir, s);

  auto step = initial_arrangement(problem, cfg.seed, cfg.perturbation_swaps, cfg.no_repeat_pairs);
  nlohmann::json relaxed = nlohmann::json::array({false});
  write_arrangement(cfg.out_dir, step.arrangement, 0);
  int exit_code = kExitOk;
  std::string failure;
  for (int t = 1; t < count; ++t) {
    try {
      step = next_arrangement(step.state, problem);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExhaustedRetries) throw;
      exit_code = kExitExhausted;
      failure = e.what();
      break;
    }
    relaxed.push_back(step.relaxed_no_repeat);
    write_arrangement(cfg.out_dir, step.arrangement, static_cast<std::size_t>(t));
  }
  write_state(state_path, step.state, s, cfg);

  const auto& objectives = step.state.objectives;
  nlohmann::json ratios = nlohmann::json::array();
  for (double obj : objectives) ratios.push_back(degradation_ratio(obj, objectives.front()));
  nlohmann::json summary{{"count", objectives.size()},
                         {"requested", count},
                         {"seed", cfg.seed},
                         {"group_sizes", s.spec.sizes},
                         {"objectives", objectives},
                         {"degradation_ratios", ratios},
                         {"no_repeat_pairs", cfg.no_repeat_pairs},
                         {"relaxed_no_repeat", relaxed}};
  io::write_file_atomic(cfg.out_dir / "summary.json", summary.dump(2) + "\n");

  out << "index  objective  degradation_ratio\n";
  for (std::size_t t = 0; t < objectives.size(); ++t) {
    out << t << "  " << io::format_number(objectives[t]) << "  " << io::format_number(ratios[t].get<double>())
        << "\n";
  }
  if (exit_code != kExitOk) throw Error(ErrorCode::ExhaustedRetries, failure);
  return exit_code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy-logic classroom seating arrangements", "cub"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (u64)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");

  std::string groups;
  int swaps = 0;
  bool no_repeat = false;
  bool verify = false;
  int count = 10;
  std::string input;
  std::string input_b;

  auto add_assign_opts = [&](CLI::App* sub) {
    sub->add_option("--groups", groups, "comma-separated group sizes, e.g. 5,5,5,5,5");
    sub->add_option("--swaps", swaps, "random swaps per rotation perturbation");
    sub->add_flag("--no-repeat-pairs", no_repeat, "split every pair co-grouped in the previous arrangement");
  };

  auto* evaluate = app.add_subcommand("evaluate", "survey CSV -> coefficients CSV");
  evaluate->add_option("survey", input, "survey CSV")->required();

  auto* arrange = app.add_subcommand("arrange", "coefficients or survey CSV -> first arrangement");
  arrange->add_option("input", input, "coefficients or survey CSV")->required();
  arrange->add_flag("--verify", verify, "compare against the exhaustive optimum (<= 12 students)");
  add_assign_opts(arrange);

  auto* rotate = app.add_subcommand("rotate", "emit the next arrangement of a rotation");
  rotate->add_option("state", input, "rotation state JSON")->required();

  auto* cmp = app.add_subcommand("compare", "co-grouping similarity of two arrangements");
  cmp->add_option("a", input, "arrangement JSON")->required();
  cmp->add_option("b", input_b, "arrangement JSON")->required();

  auto* pipeline = app.add_subcommand("pipeline", "survey -> N arrangements and a summary");
  pipeline->add_option("survey", input, "survey CSV")->required();
  pipeline->add_option("--count,-n", count, "number of arrangements")->capture_default_str();
  add_assign_opts(pipeline);

  std::vector<std::string> argv_store{"cub"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    if (!groups.empty()) cfg.groups = GroupSpec::parse(groups);
    if (swaps > 0) cfg.perturbation_swaps = swaps;
    if (no_repeat) cfg.no_repeat_pairs = true;

    if (evaluate->parsed()) return cmd_evaluate(input, cfg, out);
    if (arrange->parsed()) return cmd_arrange(input, cfg, verify, out);
    if (rotate->parsed()) {
      const fs::path state(input);
      const fs::path dir = out_opt->count() > 0 ? fs::path(out_dir)
                           : state.has_parent_path() ? state.parent_path()
                                                     : fs::path(".");
      return cmd_rotate(state, dir, out);
    }
    if (cmp->parsed()) return cmd_compare(input, input_b, out);
    if (pipeline->parsed()) return cmd_pipeline(input, cfg, count, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ExhaustedRetries ? kExitExhausted : kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace cub
