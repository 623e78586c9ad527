#include "cub/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "cub/error.hpp"
#include "cub/survey.hpp"

namespace cub::io {

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error(ErrorCode::Io, "cannot format number");
  return std::string(buf, ptr);
}

namespace {

double parse_number(const std::string& cell, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::MalformedRow, where + ": '" + cell + "' is not a number");
  }
  return value;
}

}  // namespace

void write_coefficients_csv(std::ostream& out, const std::vector<StudentCoefficients>& rows) {
  out << "student_id,D,d\n";
  for (const auto& r : rows) {
    out << r.student_id << ',' << format_number(r.coefficients.distractibility) << ','
        << format_number(r.coefficients.disruptiveness) << '\n';
  }
}

std::vector<StudentCoefficients> read_coefficients_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<StudentCoefficients> rows;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (!header) {
      if (cells != std::vector<std::string>{"student_id", "D", "d"}) {
        throw Error(ErrorCode::MalformedRow, where + ": expected header 'student_id,D,d'");
      }
      header = true;
      continue;
    }
    if (cells.size() != 3) {
      throw Error(ErrorCode::MalformedRow, where + ": expected 3 columns, got " +
                                               std::to_string(cells.size()));
    }
    if (!ids.insert(cells[0]).second) {
      throw Error(ErrorCode::DuplicateStudentId, where + ": duplicate student_id '" + cells[0] + "'");
    }
    const double big_d = parse_number(cells[1], where);
    const double small_d = parse_number(cells[2], where);
    if (!(big_d >= 0.0 && big_d <= 1.0 && small_d >= 0.0 && small_d <= 1.0)) {
      throw Error(ErrorCode::OutOfUniverse, where + ": coefficients must lie in [0,1]");
    }
    rows.push_back({cells[0], {big_d, small_d}});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyRoster, "coefficients file has no data rows");
  return rows;
}

void write_clusters_csv(std::ostream& out, const std::vector<ClusterAssignment>& rows) {
  out << "student_id,u1,u2,u3,primary\n";
  for (const auto& r : rows) {
    out << r.student_id;
    for (int j = 0; j < kClusterCount; ++j) out << ',' << format_number(r.memberships(j));
    out << ',' << r.primary << '\n';
  }
}

void write_labels_csv(std::ostream& out, const std::vector<LabeledStudent>& rows) {
  out << "student_id,cluster,association,D,d,primary_membership\n";
  for (const auto& r : rows) {
    out << r.student_id << ',' << r.label.cluster << ',' << to_string(r.label.association) << ','
        << format_number(r.coefficients.distractibility) << ','
        << format_number(r.coefficients.disruptiveness) << ','
        << format_number(r.primary_membership) << '\n';
  }
}

nlohmann::json arrangement_to_json(const Arrangement& arr, std::size_t sequence_index) {
  return {{"groups", arr.groups}, {"objective", arr.objective}, {"sequence_index", sequence_index}};
}

Arrangement arrangement_from_json(const nlohmann::json& j) {
  try {
    Arrangement arr;
    arr.groups = j.at("groups").get<Groups>();
    arr.objective = j.value("objective", 0.0);
    return arr;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("arrangement JSON: ") + e.what());
  }
}

std::string arrangement_table(const Arrangement& arr, std::size_t sequence_index) {
  std::ostringstream os;
  os << "Arrangement " << sequence_index << " (objective " << format_number(arr.objective) << ")\n";
  for (std::size_t g = 0; g < arr.groups.size(); ++g) {
    os << "  Group " << (g + 1) << ":";
    for (std::size_t i = 0; i < arr.groups[g].size(); ++i) {
      os << (i == 0 ? " " : ", ") << arr.groups[g][i];
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json report_to_json(const ComparisonReport& r) {
  return {{"similarity", r.similarity},
          {"shared_pairs", r.shared_pairs},
          {"pairs_a", r.pairs_a},
          {"pairs_b", r.pairs_b}};
}

nlohmann::json rotation_to_json(const RotationFile& f) {
  nlohmann::json roster = nlohmann::json::array();
  for (const auto& s : f.roster) {
    roster.push_back({{"student_id", s.student_id},
                      {"cluster", s.label.cluster},
                      {"association", std::string(to_string(s.label.association))},
                      {"D", s.coefficients.distractibility},
                      {"d", s.coefficients.disruptiveness},
                      {"primary_membership", s.primary_membership}});
  }
  return {{"rng_algorithm", std::string(kRngAlgorithm)},
          {"rng_seed", f.state.rng_seed},
          {"perturbation_swaps", f.state.perturbation_swaps},
          {"no_repeat_pairs", f.state.no_repeat_pairs},
          {"cost_mode", f.cost_mode == CostMode::RawCoefficients ? "raw" : "labels"},
          {"group_sizes", f.spec.sizes},
          {"history", f.state.history},
          {"objectives", f.state.objectives},
          {"roster", roster}};
}

RotationFile rotation_from_json(const nlohmann::json& j) {
  try {
    RotationFile f;
    const auto algo = j.at("rng_algorithm").get<std::string>();
    if (algo != kRngAlgorithm) {
      throw Error(ErrorCode::Parse, "rotation state uses unsupported RNG '" + algo + "'");
    }
    f.state.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    f.state.perturbation_swaps = j.at("perturbation_swaps").get<int>();
    f.state.no_repeat_pairs = j.at("no_repeat_pairs").get<bool>();
    const auto mode = j.at("cost_mode").get<std::string>();
    if (mode != "raw" && mode != "labels") throw Error(ErrorCode::Parse, "unknown cost_mode '" + mode + "'");
    f.cost_mode = mode == "raw" ? CostMode::RawCoefficients : CostMode::LabelRepresentatives;
    f.spec.sizes = j.at("group_sizes").get<std::vector<int>>();
    f.state.history = j.at("history").get<std::vector<Groups>>();
    f.state.objectives = j.at("objectives").get<std::vector<double>>();
    if (f.state.history.empty() || f.state.history.size() != f.state.objectives.size()) {
      throw Error(ErrorCode::Parse, "rotation state history and objectives are inconsistent");
    }
    for (const auto& s : j.at("roster")) {
      LabeledStudent st;
      st.student_id = s.at("student_id").get<std::string>();
      st.label = {s.at("cluster").get<int>(), parse_association(s.at("association").get<std::string>())};
      if (st.label.cluster < 1 || st.label.cluster > kClusterCount) {
        throw Error(ErrorCode::Parse, "cluster out of range for '" + st.student_id + "'");
      }
      st.coefficients = {s.at("D").get<double>(), s.at("d").get<double>()};
      st.primary_membership = s.at("primary_membership").get<double>();
      f.roster.push_back(std::move(st));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("rotation state JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "'" + path.string() + "': " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot replace '" + path.string() + "': " + ec.message());
}

}  // namespace cub::io
