#ifndef CUB_EVALUATE_HPP
#define CUB_EVALUATE_HPP

#include <set>
#include <string>
#include <utility>

#include "cub/assign.hpp"

namespace cub {

using StudentPair = std::pair<std::string, std::string>;  // first < second

std::set<StudentPair> co_grouped_pairs(const Groups& groups);

struct ComparisonReport {
  double similarity = 1.0;
  std::size_t shared_pairs = 0;
  std::size_t pairs_a = 0;
  std::size_t pairs_b = 0;
};

/// Jaccard similarity of the co-grouped pair sets. Throws RosterMismatch
/// when the arrangements seat different students.
ComparisonReport compare(const Groups& a, const Groups& b);

}  // namespace cub

#endif  // CUB_EVALUATE_HPP
