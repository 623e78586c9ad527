#include "cub/classify.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "cub/error.hpp"

namespace cub {

std::string_view to_string(Association a) noexcept {
  return a == Association::High ? "High" : "Low";
}

Association parse_association(std::string_view s) {
  if (s == "High") return Association::High;
  if (s == "Low") return Association::Low;
  throw Error(ErrorCode::Parse, "unknown association '" + std::string(s) + "'");
}

CategoryLabel CategoryLabel::from_index(int index) {
  if (index < 0 || index >= kLabelCount) {
    throw Error(ErrorCode::InvalidSize, "category label index out of range");
  }
  return {index / 2 + 1, index % 2 == 0 ? Association::High : Association::Low};
}

double association_threshold(std::span<const double> primary_memberships) {
  if (primary_memberships.empty()) {
    throw Error(ErrorCode::EmptyCluster, "association threshold of an empty cluster");
  }
  const double mean =
      std::accumulate(primary_memberships.begin(), primary_memberships.end(), 0.0) /
      static_cast<double>(primary_memberships.size());
  // Rounding can push the mean of equal values past them.
  const auto [lo, hi] = std::minmax_element(primary_memberships.begin(), primary_memberships.end());
  return std::clamp(mean, *lo, *hi);
}

std::vector<LabeledStudent> classify(const std::vector<ClusterAssignment>& assignments,
                                     const std::vector<StudentCoefficients>& coeffs) {
  if (assignments.size() != coeffs.size()) {
    throw Error(ErrorCode::MismatchedRosters, "cluster assignments and coefficients differ in size");
  }
  std::unordered_map<std::string, const Coefficients*> by_id;
  for (const auto& c : coeffs) by_id.emplace(c.student_id, &c.coefficients);

  std::array<std::vector<double>, kClusterCount> per_cluster;
  for (const auto& a : assignments) {
    if (a.primary < 1 || a.primary > kClusterCount) {
      throw Error(ErrorCode::InvalidSize, "primary cluster out of range for '" + a.student_id + "'");
    }
    if (!by_id.contains(a.student_id)) {
      throw Error(ErrorCode::MismatchedRosters, "no coefficients for student '" + a.student_id + "'");
    }
    per_cluster[a.primary - 1].push_back(a.memberships(a.primary - 1));
  }
  std::array<double, kClusterCount> threshold{};
  for (int c = 0; c < kClusterCount; ++c) {
    if (!per_cluster[c].empty()) threshold[c] = association_threshold(per_cluster[c]);
  }

  std::vector<LabeledStudent> out;
  out.reserve(assignments.size());
  for (const auto& a : assignments) {
    const double u = a.memberships(a.primary - 1);
    const auto assoc = u >= threshold[a.primary - 1] ? Association::High : Association::Low;
    out.push_back({a.student_id, {a.primary, assoc}, *by_id.at(a.student_id), u});
  }
  return out;
}

}  // namespace cub
