#ifndef CUB_FIS_HPP
#define CUB_FIS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cub/error.hpp"
#include "cub/survey.hpp"

namespace cub {

/// Triangular membership function on [0, 1]. Shoulders (a == b or b == c)
/// evaluate to 1 at the peak and to 0 at or beyond the outer foot.
template <typename Scalar>
struct TriangularMF {
  Scalar a;
  Scalar b;
  Scalar c;

  TriangularMF(Scalar left, Scalar peak, Scalar right) : a(left), b(peak), c(right) {
    if (!(a <= b && b <= c && a < c)) {
      throw Error(ErrorCode::InvalidSize, "triangular MF requires a <= b <= c and a < c");
    }
  }

  Scalar operator()(Scalar x) const {
    if (x == b) return Scalar(1);
    if (x < b) return x <= a ? Scalar(0) : (x - a) / (b - a);
    return x >= c ? Scalar(0) : (c - x) / (c - b);
  }

  template <typename Derived>
  Eigen::Array<Scalar, Eigen::Dynamic, 1> sample(const Eigen::ArrayBase<Derived>& xs) const {
    return xs.unaryExpr([this](Scalar x) { return (*this)(x); });
  }
};

template <typename Scalar>
struct LinguisticVariable {
  std::string name;
  std::vector<TriangularMF<Scalar>> terms;

  /// n triangles with peaks at i / (n - 1) and 50% overlap.
  static LinguisticVariable uniform(std::string name, std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidSize, "linguistic variable '" + name + "' needs >= 2 terms");
    LinguisticVariable var{std::move(name), {}};
    auto peak = [n](std::size_t i) { return Scalar(i) / Scalar(n - 1); };
    for (std::size_t i = 0; i < n; ++i) {
      const Scalar left = i == 0 ? Scalar(0) : peak(i - 1);
      const Scalar right = i + 1 == n ? Scalar(1) : peak(i + 1);
      var.terms.emplace_back(left, peak(i), right);
    }
    return var;
  }

  std::size_t size() const noexcept { return terms.size(); }
};

/// Memberships of `value` in every term of `var`. Throws OutOfUniverse
/// outside [0, 1].
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> fuzzify(Scalar value, const LinguisticVariable<Scalar>& var) {
  if (!(value >= Scalar(0) && value <= Scalar(1))) {
    throw Error(ErrorCode::OutOfUniverse, "value outside [0,1] for variable '" + var.name + "'");
  }
  Eigen::Array<Scalar, Eigen::Dynamic, 1> mu(static_cast<Eigen::Index>(var.size()));
  for (std::size_t i = 0; i < var.size(); ++i) mu(static_cast<Eigen::Index>(i)) = var.terms[i](value);
  return mu;
}

/// A fuzzy set sampled on a uniform grid over [0, 1].
template <typename Scalar>
struct SampledSet {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> grid;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> mu;

  static SampledSet zeros(Eigen::Index points) {
    SampledSet s;
    s.grid = Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(points, Scalar(0), Scalar(1));
    s.mu = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(points);
    return s;
  }

  Scalar height() const { return mu.size() == 0 ? Scalar(0) : mu.maxCoeff(); }
};

/// Discrete centroid sum(x * mu) / sum(mu). Throws ZeroArea for an empty set.
template <typename Scalar>
Scalar defuzzify_centroid(const SampledSet<Scalar>& set) {
  const Scalar area = set.mu.sum();
  if (!(area > Scalar(0))) throw Error(ErrorCode::ZeroArea, "cannot defuzzify a set with zero area");
  return (set.grid * set.mu).sum() / area;
}

struct Rule {
  std::array<std::size_t, 3> antecedent;  // noise, focus, seated term indices
  std::array<std::size_t, 2> consequent;  // D term, d term
};

inline constexpr std::size_t kDefaultOutputTerms = 5;
inline constexpr Eigen::Index kDefaultGridPoints = 201;

/// Complete Mamdani rule base: exactly one rule per antecedent triple,
/// stored in lexicographic antecedent order.
class RuleBase {
 public:
  RuleBase(std::array<std::size_t, 3> input_sizes, std::size_t output_size, std::vector<Rule> rules);

  const std::array<LinguisticVariable<double>, 3>& inputs() const noexcept { return inputs_; }
  const std::array<LinguisticVariable<double>, 2>& outputs() const noexcept { return outputs_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::array<std::size_t, 3> input_sizes() const noexcept;
  std::size_t output_size() const noexcept { return outputs_[0].size(); }

  const Rule& rule_for(std::size_t noise, std::size_t focus, std::size_t seated) const;

 private:
  std::array<LinguisticVariable<double>, 3> inputs_;
  std::array<LinguisticVariable<double>, 2> outputs_;
  std::vector<Rule> rules_;
};

/// Generated rule base: D follows the Focus and Seated deficits, d follows
/// Noise and Seated, each rounded half-up onto the output terms.
RuleBase build_default_rulebase(std::array<std::size_t, 3> input_sizes,
                                std::size_t output_size = kDefaultOutputTerms);

/// Rule table override: JSON array of `{"if": [i, j, k], "then": [D, d]}`.
RuleBase parse_rulebase_json(std::istream& in, std::array<std::size_t, 3> input_sizes,
                             std::size_t output_size = kDefaultOutputTerms);
RuleBase load_rulebase(const std::string& path, std::array<std::size_t, 3> input_sizes,
                       std::size_t output_size = kDefaultOutputTerms);

struct CrispInputs {
  double noise;
  double focus;
  double seated;
};

/// Firing strength (min of antecedent memberships) of every rule, in rule order.
Eigen::ArrayXd firing_strengths(const RuleBase& rb, const CrispInputs& inputs);

struct InferenceResult {
  SampledSet<double> distractibility;  // D
  SampledSet<double> disruptiveness;   // d
};

/// Mamdani min/max inference; each output is the max over rules of the
/// consequent MF clipped at the rule's firing strength.
InferenceResult infer(const RuleBase& rb, const CrispInputs& inputs,
                      Eigen::Index grid_points = kDefaultGridPoints);

struct Coefficients {
  double distractibility;  // D: prone to being distracted
  double disruptiveness;   // d: likely to distract others
};

Coefficients evaluate_student(const SurveyEntry& entry, const SurveyVocabulary& vocab,
                              const RuleBase& rb, Eigen::Index grid_points = kDefaultGridPoints);

}  // namespace cub

#endif  // CUB_FIS_HPP
