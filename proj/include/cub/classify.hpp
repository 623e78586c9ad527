#ifndef CUB_CLASSIFY_HPP
#define CUB_CLASSIFY_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cub/fcm.hpp"
#include "cub/fis.hpp"

namespace cub {

enum class Association { High, Low };

std::string_view to_string(Association a) noexcept;
Association parse_association(std::string_view s);

struct CategoryLabel {
  int cluster;  // 1..3
  Association association;

  /// Dense index 0..5: (cluster - 1) * 2 + (Low ? 1 : 0).
  int index() const noexcept { return (cluster - 1) * 2 + (association == Association::Low ? 1 : 0); }
  static CategoryLabel from_index(int index);

  friend bool operator==(const CategoryLabel&, const CategoryLabel&) = default;
};

inline constexpr int kLabelCount = 6;

struct StudentCoefficients {
  std::string student_id;
  Coefficients coefficients;
};

struct LabeledStudent {
  std::string student_id;
  CategoryLabel label;
  Coefficients coefficients;
  double primary_membership;
};

/// Mean of the primary memberships of one cluster's members.
double association_threshold(std::span<const double> primary_memberships);

/// A member is High iff its primary membership is >= its cluster's mean.
/// Output follows the order of `assignments`.
std::vector<LabeledStudent> classify(const std::vector<ClusterAssignment>& assignments,
                                     const std::vector<StudentCoefficients>& coeffs);

}  // namespace cub

#endif  // CUB_CLASSIFY_HPP
