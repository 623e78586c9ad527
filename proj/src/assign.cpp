#include "cub/assign.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "cub/error.hpp"

namespace cub {

namespace {

constexpr double kTieTolerance = 1e-12;

using IndicatorMatrix = Eigen::MatrixXd;

IndicatorMatrix indicator(const Partition& p, int groups) {
  IndicatorMatrix m = IndicatorMatrix::Zero(static_cast<Eigen::Index>(p.size()), groups);
  for (std::size_t i = 0; i < p.size(); ++i) m(static_cast<Eigen::Index>(i), p[i]) = 1.0;
  return m;
}

}  // namespace

// GroupSpec --------------------------------------------------------------------

std::size_t GroupSpec::total() const noexcept {
  std::size_t sum = 0;
  for (int s : sizes) sum += static_cast<std::size_t>(std::max(s, 0));
  return sum;
}

void GroupSpec::validate(std::size_t roster_size) const {
  if (sizes.size() < 2) throw Error(ErrorCode::SpecMismatch, "group spec needs at least 2 groups");
  for (int s : sizes) {
    if (s <= 0) throw Error(ErrorCode::SpecMismatch, "group sizes must be positive");
  }
  if (total() != roster_size) {
    throw Error(ErrorCode::SpecMismatch, "sizes sum to " + std::to_string(total()) +
                                             ", roster has " + std::to_string(roster_size));
  }
}

GroupSpec GroupSpec::parse(std::string_view text) {
  GroupSpec spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto token = text.substr(start, end - start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::Parse, "invalid group size '" + std::string(token) + "'");
    }
    spec.sizes.push_back(value);
    start = end + 1;
  }
  return spec;
}

// CostModel --------------------------------------------------------------------

Eigen::Vector2d CostModel::profile(const LabeledStudent& s) const {
  if (mode == CostMode::RawCoefficients) {
    return {s.coefficients.distractibility, s.coefficients.disruptiveness};
  }
  return representatives[static_cast<std::size_t>(s.label.index())];
}

CostModel default_cost_model(CostMode mode) {
  const auto seeds = seed_centers<double>();
  const Eigen::Vector2d centroid(0.6, 0.4);
  constexpr double shift = 0.15;
  CostModel cm;
  cm.mode = mode;
  for (int c = 0; c < kClusterCount; ++c) {
    const Eigen::Vector2d seed = seeds.row(c).transpose();
    cm.representatives[static_cast<std::size_t>(2 * c)] = seed;
    const Eigen::Vector2d toward = (centroid - seed).normalized();
    cm.representatives[static_cast<std::size_t>(2 * c + 1)] =
        (seed + shift * toward).cwiseMax(0.0).cwiseMin(1.0);
  }
  return cm;
}

double pair_cost(const LabeledStudent& a, const LabeledStudent& b, const CostModel& cm) {
  const Eigen::Vector2d pa = cm.profile(a);
  const Eigen::Vector2d pb = cm.profile(b);
  return pa.x() * pb.y() + pb.x() * pa.y();
}

// Canonical form ---------------------------------------------------------------

Groups canonicalize(Groups groups) {
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.empty() || b.empty()) return a.size() < b.size();
    return a.front() < b.front();
  });
  return groups;
}

std::string canonical_key(const Groups& groups) {
  std::string key;
  for (const auto& g : canonicalize(groups)) {
    for (const auto& id : g) {
      key += id;
      key += '\x1f';
    }
    key += '\x1e';
  }
  return key;
}

double arrangement_objective(const Groups& groups, const std::vector<LabeledStudent>& roster,
                             const CostModel& cm) {
  std::unordered_map<std::string, const LabeledStudent*> by_id;
  for (const auto& s : roster) by_id.emplace(s.student_id, &s);
  std::unordered_map<std::string, int> seen;
  double total = 0.0;
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto it = by_id.find(g[i]);
      if (it == by_id.end()) {
        throw Error(ErrorCode::InvalidPartition, "student '" + g[i] + "' is not in the roster");
      }
      if (++seen[g[i]] > 1) {
        throw Error(ErrorCode::InvalidPartition, "student '" + g[i] + "' appears more than once");
      }
      for (std::size_t j = 0; j < i; ++j) total += pair_cost(*it->second, *by_id.at(g[j]), cm);
    }
  }
  if (seen.size() != by_id.size()) {
    throw Error(ErrorCode::InvalidPartition, "arrangement covers " + std::to_string(seen.size()) +
                                                 " of " + std::to_string(by_id.size()) + " students");
  }
  return total;
}

// GroupingProblem --------------------------------------------------------------

GroupingProblem::GroupingProblem(const std::vector<LabeledStudent>& roster, GroupSpec spec,
                                 const CostModel& cm)
    : spec_(std::move(spec)) {
  spec_.validate(roster.size());
  const auto n = static_cast<Eigen::Index>(roster.size());
  profiles_.resize(n, 2);
  ids_.reserve(roster.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = roster[static_cast<std::size_t>(i)];
    ids_.push_back(s.student_id);
    profiles_.row(i) = cm.profile(s).transpose();
  }
  std::vector<int> order(roster.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ids_[a] < ids_[b]; });
  id_rank_.assign(roster.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && ids_[order[r]] == ids_[order[r - 1]]) {
      throw Error(ErrorCode::DuplicateStudentId, "duplicate student_id '" + ids_[order[r]] + "'");
    }
    id_rank_[order[r]] = static_cast<int>(r);
  }
  // cost(a, b) = D_a d_b + D_b d_a, no self cost.
  cost_ = profiles_.col(0) * profiles_.col(1).transpose();
  cost_ = (cost_ + cost_.transpose()).eval();
  cost_.diagonal().setZero();
}

double GroupingProblem::objective(const Partition& p) const {
  const IndicatorMatrix m = indicator(p, group_count());
  // Each within-group pair is counted twice in the quadratic form.
  return 0.5 * (m.transpose() * cost_ * m).trace();
}

Partition GroupingProblem::partition_of(const Groups& groups) const {
  if (groups.size() != spec_.sizes.size()) {
    throw Error(ErrorCode::InvalidPartition, "arrangement has " + std::to_string(groups.size()) +
                                                 " groups, spec has " +
                                                 std::to_string(spec_.sizes.size()));
  }
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < ids_.size(); ++i) index.emplace(ids_[i], static_cast<int>(i));
  // Groups may arrive in any order (e.g. canonical form); each takes the
  // first free slot of matching size, preferring its own position.
  std::vector<bool> used(spec_.sizes.size(), false);
  Partition p(ids_.size(), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int size = static_cast<int>(groups[g].size());
    std::size_t slot = spec_.sizes.size();
    if (spec_.sizes[g] == size && !used[g]) {
      slot = g;
    } else {
      for (std::size_t s = 0; s < spec_.sizes.size(); ++s) {
        if (!used[s] && spec_.sizes[s] == size) {
          slot = s;
          break;
        }
      }
    }
    if (slot == spec_.sizes.size()) {
      throw Error(ErrorCode::InvalidPartition,
                  "group sizes of the arrangement do not match the group sizes (no slot for a group of " +
                      std::to_string(size) + ")");
    }
    used[slot] = true;
    for (const auto& id : groups[g]) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw Error(ErrorCode::InvalidPartition, "student '" + id + "' is not in the roster");
      }
      if (p[it->second] != -1) {
        throw Error(ErrorCode::InvalidPartition, "student '" + id + "' appears more than once");
      }
      p[it->second] = static_cast<int>(slot);
    }
  }
  return p;
}

Groups GroupingProblem::groups_of(const Partition& p) const {
  Groups groups(spec_.sizes.size());
  for (std::size_t i = 0; i < p.size(); ++i) groups[static_cast<std::size_t>(p[i])].push_back(ids_[i]);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

Arrangement GroupingProblem::arrangement_of(const Partition& p) const {
  return Arrangement{groups_of(p), objective(p)};
}

// Construction -----------------------------------------------------------------

Partition sequential_construct(const GroupingProblem& problem) {
  const auto n = problem.size();
  const auto& prof = problem.profiles();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (prof(a, 1) != prof(b, 1)) return prof(a, 1) > prof(b, 1);
    if (prof(a, 0) != prof(b, 0)) return prof(a, 0) > prof(b, 0);
    return problem.id_rank()[a] < problem.id_rank()[b];
  });

  const int groups = problem.group_count();
  std::vector<int> filled(static_cast<std::size_t>(groups), 0);
  Eigen::MatrixXd to_group = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), groups);
  Partition p(n, -1);
  for (int s : order) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int g = 0; g < groups; ++g) {
      if (filled[g] >= problem.spec().sizes[g]) continue;
      const double marginal = to_group(s, g);
      if (marginal < best_cost - kTieTolerance) {
        best = g;
        best_cost = marginal;
      }
    }
    p[s] = best;
    ++filled[best];
    to_group.col(best) += problem.cost().col(s);
  }
  return p;
}

Arrangement sequential_construct(const std::vector<LabeledStudent>& roster, const GroupSpec& spec,
                                 const CostModel& cm) {
  const GroupingProblem problem(roster, spec, cm);
  return problem.arrangement_of(sequential_construct(problem));
}

// Local search -----------------------------------------------------------------

Partition improve_swaps(const GroupingProblem& problem, Partition p, int max_passes,
                        const SearchConstraints& constraints) {
  const auto n = static_cast<int>(problem.size());
  const int groups = problem.group_count();
  const auto& cost = problem.cost();
  const auto& rank = problem.id_rank();

  // to_group(x, g): summed cost between x and the current members of g.
  Eigen::MatrixXd to_group = cost * indicator(p, groups);
  Eigen::MatrixXd conflicts;
  Eigen::MatrixXd forbid;
  if (constraints.forbidden != nullptr) {
    forbid = constraints.forbidden->cast<double>();
    conflicts = forbid * indicator(p, groups);
  }

  auto pair_key = [&](int a, int b) {
    return std::pair{std::min(rank[a], rank[b]), std::max(rank[a], rank[b])};
  };

  std::vector<std::pair<int, int>> rejected;
  for (int pass = 0; pass < max_passes; ++pass) {
    rejected.clear();
    bool moved = false;
    while (true) {
      int best_a = -1;
      int best_b = -1;
      double best_delta = 0.0;
      auto beats_best = [&](double delta, int a, int b) {
        if (best_a < 0) return true;
        if (delta < best_delta - kTieTolerance) return true;
        return delta <= best_delta + kTieTolerance && pair_key(a, b) < pair_key(best_a, best_b);
      };
      for (int a = 0; a < n; ++a) {
        const int ga = p[a];
        for (int b = a + 1; b < n; ++b) {
          const int gb = p[b];
          if (ga == gb) continue;
          const double delta = to_group(b, ga) - to_group(a, ga) + to_group(a, gb) -
                               to_group(b, gb) - 2.0 * cost(a, b);
          if (delta >= -kTieTolerance || !beats_best(delta, a, b)) continue;
          if (constraints.forbidden != nullptr &&
              (conflicts(a, gb) - forbid(a, b) > 0.5 || conflicts(b, ga) - forbid(a, b) > 0.5)) {
            continue;
          }
          if (std::find(rejected.begin(), rejected.end(), std::pair{a, b}) != rejected.end()) continue;
          best_a = a;
          best_b = b;
          best_delta = delta;
        }
      }
      if (best_a < 0) break;
      const int ga = p[best_a];
      const int gb = p[best_b];
      std::swap(p[best_a], p[best_b]);
      if (constraints.accept && !constraints.accept(p)) {
        std::swap(p[best_a], p[best_b]);
        rejected.emplace_back(best_a, best_b);
        continue;
      }
      to_group.col(ga) += cost.col(best_b) - cost.col(best_a);
      to_group.col(gb) += cost.col(best_a) - cost.col(best_b);
      if (constraints.forbidden != nullptr) {
        conflicts.col(ga) += forbid.col(best_b) - forbid.col(best_a);
        conflicts.col(gb) += forbid.col(best_a) - forbid.col(best_b);
      }
      moved = true;
      break;
    }
    if (!moved) break;
  }
  return p;
}

Arrangement improve_swaps(const Arrangement& arr, const std::vector<LabeledStudent>& roster,
                          const CostModel& cm, int max_passes) {
  GroupSpec spec;
  for (const auto& g : arr.groups) spec.sizes.push_back(static_cast<int>(g.size()));
  const GroupingProblem problem(roster, spec, cm);
  return problem.arrangement_of(improve_swaps(problem, problem.partition_of(arr.groups), max_passes));
}

// Exhaustive enumeration ---------------------------------------------------------

void enumerate_partitions(const GroupingProblem& problem,
                          const std::function<void(const Partition&)>& visit) {
  if (problem.size() > kBruteForceLimit) {
    throw Error(ErrorCode::TooLarge, "exhaustive search supports at most " +
                                         std::to_string(kBruteForceLimit) + " students, got " +
                                         std::to_string(problem.size()));
  }
  const auto& sizes = problem.spec().sizes;
  const int groups = problem.group_count();
  std::vector<int> filled(static_cast<std::size_t>(groups), 0);
  Partition p(problem.size(), -1);

  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == p.size()) {
      visit(p);
      return;
    }
    for (int g = 0; g < groups; ++g) {
      if (filled[g] >= sizes[g]) continue;
      if (filled[g] == 0) {
        // Open an empty group only if no earlier group of equal size is still empty.
        bool earlier_empty = false;
        for (int h = 0; h < g; ++h) earlier_empty |= (sizes[h] == sizes[g] && filled[h] == 0);
        if (earlier_empty) continue;
      }
      p[i] = g;
      ++filled[g];
      place(i + 1);
      --filled[g];
    }
    p[i] = -1;
  };
  place(0);
}

BruteForceResult brute_force_optimal(const GroupingProblem& problem) {
  BruteForceResult result;
  Partition best;
  double best_objective = std::numeric_limits<double>::infinity();
  enumerate_partitions(problem, [&](const Partition& p) {
    ++result.evaluated;
    const double obj = problem.objective(p);
    if (obj < best_objective - kTieTolerance) {
      best_objective = obj;
      best = p;
    }
  });
  result.best = problem.arrangement_of(best);
  return result;
}

BruteForceResult brute_force_optimal(const std::vector<LabeledStudent>& roster,
                                     const GroupSpec& spec, const CostModel& cm) {
  if (roster.size() > kBruteForceLimit) {
    throw Error(ErrorCode::TooLarge, "exhaustive search supports at most " +
                                         std::to_string(kBruteForceLimit) + " students, got " +
                                         std::to_string(roster.size()));
  }
  return brute_force_optimal(GroupingProblem(roster, spec, cm));
}

}  // namespace cub
