#ifndef CUB_ASSIGN_HPP
#define CUB_ASSIGN_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cub/classify.hpp"

namespace cub {

struct GroupSpec {
  std::vector<int> sizes;

  /// Throws SpecMismatch unless there are >= 2 positive sizes that sum to
  /// `roster_size`.
  void validate(std::size_t roster_size) const;
  std::size_t total() const noexcept;
  static GroupSpec parse(std::string_view comma_separated);
};

enum class CostMode { LabelRepresentatives, RawCoefficients };

/// Maps each student to the (D, d) profile used for pair costs.
struct CostModel {
  std::array<Eigen::Vector2d, kLabelCount> representatives;
  CostMode mode = CostMode::LabelRepresentatives;

  Eigen::Vector2d profile(const LabeledStudent& s) const;
};

/// High association takes the cluster seed; Low shifts it 0.15 (Euclidean)
/// toward the global centroid (0.6, 0.4).
CostModel default_cost_model(CostMode mode = CostMode::LabelRepresentatives);

/// D_a * d_b + D_b * d_a over the students' profiles.
double pair_cost(const LabeledStudent& a, const LabeledStudent& b, const CostModel& cm);

using Groups = std::vector<std::vector<std::string>>;

struct Arrangement {
  Groups groups;  // group i holds spec.sizes[i] ids, sorted ascending
  double objective = 0.0;
};

/// Members sorted within each group, groups ordered by their smallest member.
Groups canonicalize(Groups groups);
std::string canonical_key(const Groups& groups);

/// Sum of pair costs over unordered within-group pairs. Throws
/// InvalidPartition unless `groups` partitions the roster exactly.
double arrangement_objective(const Groups& groups, const std::vector<LabeledStudent>& roster,
                             const CostModel& cm);

/// Student-index view of a partition: group_of[i] is the group of roster[i].
using Partition = std::vector<int>;

/// Precomputed pair-cost matrix and id bookkeeping for one roster and spec.
class GroupingProblem {
 public:
  GroupingProblem(const std::vector<LabeledStudent>& roster, GroupSpec spec, const CostModel& cm);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const GroupSpec& spec() const noexcept { return spec_; }
  int group_count() const noexcept { return static_cast<int>(spec_.sizes.size()); }
  const Eigen::MatrixXd& cost() const noexcept { return cost_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& profiles() const noexcept { return profiles_; }
  /// Position of each student in ascending id order.
  const std::vector<int>& id_rank() const noexcept { return id_rank_; }

  double objective(const Partition& p) const;
  Partition partition_of(const Groups& groups) const;
  Groups groups_of(const Partition& p) const;
  Arrangement arrangement_of(const Partition& p) const;

 private:
  std::vector<std::string> ids_;
  GroupSpec spec_;
  Eigen::Matrix<double, Eigen::Dynamic, 2> profiles_;
  Eigen::MatrixXd cost_;
  std::vector<int> id_rank_;
};

/// Greedy fill: students by descending d, then descending D, then id; each
/// goes to the open group with the smallest marginal cost (lowest index on ties).
Partition sequential_construct(const GroupingProblem& problem);
Arrangement sequential_construct(const std::vector<LabeledStudent>& roster, const GroupSpec& spec,
                                 const CostModel& cm);

struct SearchConstraints {
  /// Pairs that may not share a group; swaps creating such a pair are skipped.
  const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>* forbidden = nullptr;
  /// Candidate partitions for which this returns false are never entered.
  std::function<bool(const Partition&)> accept;
};

inline constexpr int kDefaultMaxPasses = 100000;

/// Best-improvement descent over cross-group pair swaps. One swap per pass;
/// ties go to the lexicographically smallest id pair.
Partition improve_swaps(const GroupingProblem& problem, Partition start,
                        int max_passes = kDefaultMaxPasses, const SearchConstraints& constraints = {});
Arrangement improve_swaps(const Arrangement& arr, const std::vector<LabeledStudent>& roster,
                          const CostModel& cm, int max_passes = kDefaultMaxPasses);

struct BruteForceResult {
  Arrangement best;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kBruteForceLimit = 12;

/// Exhaustive search over all partitions matching the spec, counting each
/// unordered arrangement of equal-size groups once. Throws TooLarge above 12.
BruteForceResult brute_force_optimal(const GroupingProblem& problem);
BruteForceResult brute_force_optimal(const std::vector<LabeledStudent>& roster,
                                     const GroupSpec& spec, const CostModel& cm);

/// Calls `visit` on every distinct partition (same dedup as brute_force_optimal).
void enumerate_partitions(const GroupingProblem& problem,
                          const std::function<void(const Partition&)>& visit);

// Rotation -------------------------------------------------------------------

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-per-rotation";
inline constexpr int kRotationRetries = 50;

struct RotationState {
  std::vector<Groups> history;  // canonical forms, oldest first
  std::vector<double> objectives;
  std::uint64_t rng_seed = 42;
  int perturbation_swaps = 3;
  bool no_repeat_pairs = false;
};

struct RotationOutcome {
  Arrangement arrangement;
  RotationState state;
  int attempts = 0;
  bool relaxed_no_repeat = false;
};

/// First arrangement: sequential_construct followed by improve_swaps.
/// Returns a state whose history holds it.
RotationOutcome initial_arrangement(const GroupingProblem& problem, std::uint64_t seed,
                                    int perturbation_swaps, bool no_repeat_pairs);

/// Next distinct arrangement: perturb the last one with k random swaps and
/// re-optimize, never re-entering a partition from history. With
/// no_repeat_pairs, attempts start from random arrangements that split every
/// previously co-grouped pair and keep that property during the search; after
/// 50 failed attempts that constraint is dropped. Throws ExhaustedRetries when
/// no unused partition can be found.
RotationOutcome next_arrangement(const RotationState& state, const GroupingProblem& problem);
RotationOutcome next_arrangement(const RotationState& state,
                                 const std::vector<LabeledStudent>& roster, const GroupSpec& spec,
                                 const CostModel& cm);

/// objective / first objective; 1 when both are zero.
double degradation_ratio(double objective, double first_objective);

}  // namespace cub

#endif  // CUB_ASSIGN_HPP
