#include "cub/fis.hpp"

#include <fstream>

#include <json.hpp>

namespace cub {

namespace {

std::size_t flat_index(const std::array<std::size_t, 3>& sizes, std::size_t i, std::size_t j,
                       std::size_t k) {
  return (i * sizes[1] + j) * sizes[2] + k;
}

// round_half_up((p / (np - 1) + q / (nq - 1)) / 2 * (out - 1)) in integer arithmetic.
std::size_t blended_term(std::size_t p, std::size_t np, std::size_t q, std::size_t nq,
                         std::size_t out) {
  const std::size_t num = (p * (nq - 1) + q * (np - 1)) * (out - 1);
  const std::size_t den = 2 * (np - 1) * (nq - 1);
  return (2 * num + den) / (2 * den);
}

}  // namespace

RuleBase::RuleBase(std::array<std::size_t, 3> input_sizes, std::size_t output_size,
                   std::vector<Rule> rules)
    : inputs_{LinguisticVariable<double>::uniform("Noise", input_sizes[0]),
              LinguisticVariable<double>::uniform("Focus", input_sizes[1]),
              LinguisticVariable<double>::uniform("Seated", input_sizes[2])},
      outputs_{LinguisticVariable<double>::uniform("D", output_size),
               LinguisticVariable<double>::uniform("d", output_size)} {
  const std::size_t total = input_sizes[0] * input_sizes[1] * input_sizes[2];
  std::vector<const Rule*> slot(total, nullptr);
  for (const auto& r : rules) {
    for (int v = 0; v < 3; ++v) {
      if (r.antecedent[v] >= input_sizes[v]) {
        throw Error(ErrorCode::IncompleteRuleBase, "rule antecedent index out of range");
      }
    }
    for (int v = 0; v < 2; ++v) {
      if (r.consequent[v] >= output_size) {
        throw Error(ErrorCode::IncompleteRuleBase, "rule consequent index out of range");
      }
    }
    auto& s = slot[flat_index(input_sizes, r.antecedent[0], r.antecedent[1], r.antecedent[2])];
    if (s != nullptr) {
      throw Error(ErrorCode::IncompleteRuleBase,
                  "duplicate rule for antecedent (" + std::to_string(r.antecedent[0]) + "," +
                      std::to_string(r.antecedent[1]) + "," + std::to_string(r.antecedent[2]) + ")");
    }
    s = &r;
  }
  rules_.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (slot[idx] == nullptr) {
      throw Error(ErrorCode::IncompleteRuleBase, "rule base has " + std::to_string(rules.size()) +
                                                     " rules, expected " + std::to_string(total));
    }
    rules_.push_back(*slot[idx]);
  }
}

std::array<std::size_t, 3> RuleBase::input_sizes() const noexcept {
  return {inputs_[0].size(), inputs_[1].size(), inputs_[2].size()};
}

const Rule& RuleBase::rule_for(std::size_t noise, std::size_t focus, std::size_t seated) const {
  return rules_[flat_index(input_sizes(), noise, focus, seated)];
}

RuleBase build_default_rulebase(std::array<std::size_t, 3> input_sizes, std::size_t output_size) {
  for (auto n : input_sizes) {
    if (n < 2) throw Error(ErrorCode::InvalidSize, "input term counts must be >= 2");
  }
  if (output_size < 2) throw Error(ErrorCode::InvalidSize, "output term count must be >= 2");
  const auto [n1, n2, n3] = input_sizes;
  std::vector<Rule> rules;
  rules.reserve(n1 * n2 * n3);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      for (std::size_t k = 0; k < n3; ++k) {
        rules.push_back(Rule{{i, j, k},
                             {blended_term(j, n2, k, n3, output_size),
                              blended_term(i, n1, k, n3, output_size)}});
      }
    }
  }
  return RuleBase(input_sizes, output_size, std::move(rules));
}

RuleBase parse_rulebase_json(std::istream& in, std::array<std::size_t, 3> input_sizes,
                             std::size_t output_size) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("rule base JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::Parse, "rule base JSON: expected an array of rules");
  std::vector<Rule> rules;
  rules.reserve(j.size());
  try {
    for (const auto& item : j) {
      const auto& ante = item.at("if");
      const auto& cons = item.at("then");
      if (ante.size() != 3 || cons.size() != 2) {
        throw Error(ErrorCode::Parse, "rule base JSON: 'if' needs 3 indices, 'then' needs 2");
      }
      Rule r{};
      for (int v = 0; v < 3; ++v) r.antecedent[v] = ante.at(v).get<std::size_t>();
      for (int v = 0; v < 2; ++v) r.consequent[v] = cons.at(v).get<std::size_t>();
      rules.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("rule base JSON: ") + e.what());
  }
  return RuleBase(input_sizes, output_size, std::move(rules));
}

RuleBase load_rulebase(const std::string& path, std::array<std::size_t, 3> input_sizes,
                       std::size_t output_size) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open rule base file '" + path + "'");
  return parse_rulebase_json(in, input_sizes, output_size);
}

Eigen::ArrayXd firing_strengths(const RuleBase& rb, const CrispInputs& inputs) {
  const Eigen::ArrayXd mu_noise = fuzzify(inputs.noise, rb.inputs()[0]);
  const Eigen::ArrayXd mu_focus = fuzzify(inputs.focus, rb.inputs()[1]);
  const Eigen::ArrayXd mu_seated = fuzzify(inputs.seated, rb.inputs()[2]);
  Eigen::ArrayXd strengths(static_cast<Eigen::Index>(rb.rules().size()));
  for (std::size_t r = 0; r < rb.rules().size(); ++r) {
    const auto& a = rb.rules()[r].antecedent;
    strengths(static_cast<Eigen::Index>(r)) =
        std::min({mu_noise(static_cast<Eigen::Index>(a[0])), mu_focus(static_cast<Eigen::Index>(a[1])),
                  mu_seated(static_cast<Eigen::Index>(a[2]))});
  }
  return strengths;
}

InferenceResult infer(const RuleBase& rb, const CrispInputs& inputs, Eigen::Index grid_points) {
  if (grid_points < 2) throw Error(ErrorCode::InvalidSize, "defuzzification grid needs >= 2 points");
  const Eigen::ArrayXd strengths = firing_strengths(rb, inputs);

  // max_r min(w_r, mf_{c(r)}(x)) = max_t min(max_{r: c(r)=t} w_r, mf_t(x)),
  // so the per-term clip height is all that is needed.
  std::array<Eigen::ArrayXd, 2> heights{Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(rb.output_size())),
                                        Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(rb.output_size()))};
  for (std::size_t r = 0; r < rb.rules().size(); ++r) {
    const double w = strengths(static_cast<Eigen::Index>(r));
    if (w <= 0.0) continue;
    for (int v = 0; v < 2; ++v) {
      auto& h = heights[v](static_cast<Eigen::Index>(rb.rules()[r].consequent[v]));
      h = std::max(h, w);
    }
  }

  std::array<SampledSet<double>, 2> sets{SampledSet<double>::zeros(grid_points),
                                         SampledSet<double>::zeros(grid_points)};
  for (int v = 0; v < 2; ++v) {
    for (std::size_t t = 0; t < rb.output_size(); ++t) {
      const double h = heights[v](static_cast<Eigen::Index>(t));
      if (h <= 0.0) continue;
      sets[v].mu = sets[v].mu.max(rb.outputs()[v].terms[t].sample(sets[v].grid).min(h));
    }
  }
  return InferenceResult{std::move(sets[0]), std::move(sets[1])};
}

Coefficients evaluate_student(const SurveyEntry& entry, const SurveyVocabulary& vocab,
                              const RuleBase& rb, Eigen::Index grid_points) {
  if (vocab.sizes() != rb.input_sizes()) {
    throw Error(ErrorCode::InvalidSize, "vocabulary sizes do not match the rule base inputs");
  }
  const CrispInputs crisp{answer_to_crisp(vocab.noise, entry.noise_answer),
                          answer_to_crisp(vocab.focus, entry.focus_answer),
                          answer_to_crisp(vocab.seated, entry.seated_answer)};
  const auto result = infer(rb, crisp, grid_points);
  return Coefficients{defuzzify_centroid(result.distractibility),
                      defuzzify_centroid(result.disruptiveness)};
}

}  // namespace cub
