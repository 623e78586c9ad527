#ifndef CUB_SURVEY_HPP
#define CUB_SURVEY_HPP

#include <array>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cub {

enum class Question { Noise, Focus, Seated };

std::string_view to_string(Question q) noexcept;

/// Answer set for one survey question, ordered from least- to most-problematic
/// behavior. Construction validates the term list.
class QuestionVocabulary {
 public:
  QuestionVocabulary(Question question, std::vector<std::string> terms);

  Question question() const noexcept { return question_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Index of `term` (case-insensitive, surrounding whitespace ignored).
  /// Throws UnknownTerm naming the question and the term.
  std::size_t index_of(std::string_view term) const;

 private:
  Question question_;
  std::vector<std::string> terms_;
};

struct SurveyVocabulary {
  QuestionVocabulary noise;
  QuestionVocabulary focus;
  QuestionVocabulary seated;

  const QuestionVocabulary& operator[](Question q) const noexcept;
  std::array<std::size_t, 3> sizes() const noexcept {
    return {noise.size(), focus.size(), seated.size()};
  }
};

/// Shipped vocabulary: 7 Noise, 7 Focus and 9 Seated terms (7 * 7 * 9 = 441).
SurveyVocabulary default_vocabulary();

inline constexpr std::size_t kDefaultRuleCount = 441;

/// Throws RuleCountMismatch when the product of term counts differs from
/// `expected_rule_count`.
void validate_vocabulary(const SurveyVocabulary& vocab,
                         std::size_t expected_rule_count = kDefaultRuleCount);

/// Parse `{"noise": [...], "focus": [...], "seated": [...]}`.
SurveyVocabulary parse_vocabulary_json(std::istream& in);
SurveyVocabulary load_vocabulary(const std::string& path);

struct SurveyEntry {
  std::string student_id;
  std::string noise_answer;
  std::string focus_answer;
  std::string seated_answer;

  const std::string& answer(Question q) const noexcept;
};

struct Roster {
  std::vector<SurveyEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
};

/// Reads a `student_id,noise,focus,seated` CSV. Row order is preserved and
/// answers are stored in their canonical vocabulary spelling.
Roster parse_survey(std::istream& in, const SurveyVocabulary& vocab);

/// Uniformly spaced crisp score: index / (terms - 1).
double answer_to_crisp(const QuestionVocabulary& vocab, std::string_view term);

namespace detail {
std::string trim(std::string_view s);
std::string lower(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);
}  // namespace detail

}  // namespace cub

#endif  // CUB_SURVEY_HPP
