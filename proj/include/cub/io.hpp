#ifndef CUB_IO_HPP
#define CUB_IO_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cub/assign.hpp"
#include "cub/classify.hpp"
#include "cub/evaluate.hpp"
#include "cub/fcm.hpp"

namespace cub::io {

/// Shortest text that reads back to the same double.
std::string format_number(double x);

// student_id,D,d
void write_coefficients_csv(std::ostream& out, const std::vector<StudentCoefficients>& rows);
std::vector<StudentCoefficients> read_coefficients_csv(std::istream& in);

// student_id,u1,u2,u3,primary
void write_clusters_csv(std::ostream& out, const std::vector<ClusterAssignment>& rows);

// student_id,cluster,association,D,d,primary_membership
void write_labels_csv(std::ostream& out, const std::vector<LabeledStudent>& rows);

nlohmann::json arrangement_to_json(const Arrangement& arr, std::size_t sequence_index);
Arrangement arrangement_from_json(const nlohmann::json& j);
std::string arrangement_table(const Arrangement& arr, std::size_t sequence_index);

nlohmann::json report_to_json(const ComparisonReport& r);

/// Everything `rotate` needs to continue a sequence without the original inputs.
struct RotationFile {
  RotationState state;
  std::vector<LabeledStudent> roster;
  GroupSpec spec;
  CostMode cost_mode = CostMode::LabelRepresentatives;
};

nlohmann::json rotation_to_json(const RotationFile& f);
RotationFile rotation_from_json(const nlohmann::json& j);

std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace cub::io

#endif  // CUB_IO_HPP
