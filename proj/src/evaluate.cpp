#include "cub/evaluate.hpp"

#include <algorithm>
#include <iterator>

#include "cub/error.hpp"

namespace cub {

namespace {

std::set<std::string> members(const Groups& groups) {
  std::set<std::string> out;
  for (const auto& g : groups) out.insert(g.begin(), g.end());
  return out;
}

}  // namespace

std::set<StudentPair> co_grouped_pairs(const Groups& groups) {
  std::set<StudentPair> pairs;
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        pairs.insert(std::minmax(g[i], g[j]));
      }
    }
  }
  return pairs;
}

ComparisonReport compare(const Groups& a, const Groups& b) {
  if (members(a) != members(b)) {
    throw Error(ErrorCode::RosterMismatch, "arrangements seat different rosters");
  }
  const auto pa = co_grouped_pairs(a);
  const auto pb = co_grouped_pairs(b);
  std::vector<StudentPair> shared;
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(shared));
  ComparisonReport r;
  r.shared_pairs = shared.size();
  r.pairs_a = pa.size();
  r.pairs_b = pb.size();
  const std::size_t denom = r.pairs_a + r.pairs_b - r.shared_pairs;
  r.similarity = denom > 0 ? static_cast<double>(r.shared_pairs) / static_cast<double>(denom) : 1.0;
  return r;
}

}  // namespace cub
