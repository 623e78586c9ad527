#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_set>

#include "cub/assign.hpp"
#include "cub/error.hpp"

namespace cub {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// mt19937_64 output is fully specified by the standard; the distributions are
// not, so bounded draws and shuffles are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix co_grouped(const Partition& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  BoolMatrix m(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) m(a, b) = a != b && p[a] == p[b];
  }
  return m;
}

void perturb(Partition& p, int swaps, Rng& rng) {
  const auto n = p.size();
  std::vector<std::size_t> others;
  for (int s = 0; s < swaps; ++s) {
    const auto a = static_cast<std::size_t>(rng.below(n));
    others.clear();
    for (std::size_t b = 0; b < n; ++b) {
      if (p[b] != p[a]) others.push_back(b);
    }
    if (others.empty()) return;
    std::swap(p[a], p[others[rng.below(others.size())]]);
  }
}

// Randomized depth-first fill that never places two forbidden students
// together. Students are visited old group by old group.
std::optional<Partition> random_feasible(const GroupingProblem& problem, const Partition& previous,
                                         const BoolMatrix& forbidden, Rng& rng) {
  constexpr long kNodeLimit = 200000;
  const auto n = problem.size();
  const int groups = problem.group_count();
  const auto& sizes = problem.spec().sizes;

  std::vector<int> old_groups(static_cast<std::size_t>(groups));
  std::iota(old_groups.begin(), old_groups.end(), 0);
  rng.shuffle(old_groups);
  std::vector<int> order;
  order.reserve(n);
  for (int g : old_groups) {
    std::vector<int> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (previous[i] == g) members.push_back(static_cast<int>(i));
    }
    rng.shuffle(members);
    order.insert(order.end(), members.begin(), members.end());
  }

  Partition p(n, -1);
  std::vector<int> filled(static_cast<std::size_t>(groups), 0);
  long nodes = 0;
  std::function<bool(std::size_t)> place = [&](std::size_t depth) {
    if (depth == n) return true;
    if (++nodes > kNodeLimit) return false;
    const int s = order[depth];
    std::vector<int> choices(static_cast<std::size_t>(groups));
    std::iota(choices.begin(), choices.end(), 0);
    rng.shuffle(choices);
    for (int g : choices) {
      if (filled[g] >= sizes[g]) continue;
      bool clash = false;
      for (std::size_t o = 0; o < depth && !clash; ++o) {
        clash = p[order[o]] == g && forbidden(s, order[o]);
      }
      if (clash) continue;
      p[s] = g;
      ++filled[g];
      if (place(depth + 1)) return true;
      --filled[g];
      p[s] = -1;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  return p;
}

}  // namespace

double degradation_ratio(double objective, double first_objective) {
  if (first_objective == 0.0) {
    return objective == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return objective / first_objective;
}

RotationOutcome initial_arrangement(const GroupingProblem& problem, std::uint64_t seed,
                                    int perturbation_swaps, bool no_repeat_pairs) {
  if (perturbation_swaps <= 0) throw Error(ErrorCode::InvalidSize, "perturbation swaps must be positive");
  const Partition p = improve_swaps(problem, sequential_construct(problem));
  RotationOutcome out;
  out.arrangement = problem.arrangement_of(p);
  out.state.rng_seed = seed;
  out.state.perturbation_swaps = perturbation_swaps;
  out.state.no_repeat_pairs = no_repeat_pairs;
  out.state.history.push_back(canonicalize(out.arrangement.groups));
  out.state.objectives.push_back(out.arrangement.objective);
  out.attempts = 1;
  return out;
}

RotationOutcome next_arrangement(const RotationState& state, const GroupingProblem& problem) {
  if (state.history.empty()) {
    throw Error(ErrorCode::InvalidPartition, "rotation history is empty; build the first arrangement first");
  }
  if (state.perturbation_swaps <= 0) {
    throw Error(ErrorCode::InvalidSize, "perturbation swaps must be positive");
  }
  std::unordered_set<std::string> seen;
  for (const auto& g : state.history) seen.insert(canonical_key(g));
  auto unused = [&](const Partition& p) { return !seen.contains(canonical_key(problem.groups_of(p))); };

  const Partition last = problem.partition_of(state.history.back());
  const std::uint64_t rotation = state.history.size();
  Rng rng(splitmix64(state.rng_seed ^ splitmix64(rotation)));

  std::optional<Partition> found;
  int attempts = 0;
  bool relaxed = !state.no_repeat_pairs;

  if (state.no_repeat_pairs) {
    const BoolMatrix forbidden = co_grouped(last);
    SearchConstraints constraints{&forbidden, unused};
    for (int attempt = 0; attempt < kRotationRetries && !found; ++attempt) {
      ++attempts;
      auto start = random_feasible(problem, last, forbidden, rng);
      if (!start) continue;
      Partition p = improve_swaps(problem, *start, kDefaultMaxPasses, constraints);
      if (unused(p)) found = std::move(p);
    }
    if (!found) relaxed = true;
  }

  if (!found) {
    SearchConstraints constraints{nullptr, unused};
    for (int attempt = 0; attempt < kRotationRetries && !found; ++attempt) {
      ++attempts;
      Partition start = last;
      perturb(start, state.perturbation_swaps, rng);
      Partition p = improve_swaps(problem, std::move(start), kDefaultMaxPasses, constraints);
      if (unused(p)) found = std::move(p);
    }
  }

  if (!found && problem.size() <= kBruteForceLimit) {
    // Small rosters: settle distinctness exactly.
    double best = std::numeric_limits<double>::infinity();
    enumerate_partitions(problem, [&](const Partition& p) {
      if (!unused(p)) return;
      const double obj = problem.objective(p);
      if (obj < best) {
        best = obj;
        found = p;
      }
    });
  }

  if (!found) {
    throw Error(ErrorCode::ExhaustedRetries,
                "no unused arrangement found after " + std::to_string(state.history.size()) +
                    " arrangements: roster of " + std::to_string(problem.size()) +
                    " students is too small for further distinct arrangements");
  }

  RotationOutcome out;
  out.arrangement = problem.arrangement_of(*found);
  out.state = state;
  out.state.history.push_back(canonicalize(out.arrangement.groups));
  out.state.objectives.push_back(out.arrangement.objective);
  out.attempts = attempts;
  out.relaxed_no_repeat = state.no_repeat_pairs && relaxed;
  return out;
}

RotationOutcome next_arrangement(const RotationState& state,
                                 const std::vector<LabeledStudent>& roster, const GroupSpec& spec,
                                 const CostModel& cm) {
  return next_arrangement(state, GroupingProblem(roster, spec, cm));
}

}  // namespace cub
