#include "cub/survey.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "cub/error.hpp"

namespace cub {

namespace detail {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.emplace_back(trim(line.substr(start)));
      break;
    }
    cells.emplace_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

}  // namespace detail

std::string_view to_string(Question q) noexcept {
  switch (q) {
    case Question::Noise: return "noise";
    case Question::Focus: return "focus";
    case Question::Seated: return "seated";
  }
  return "?";
}

QuestionVocabulary::QuestionVocabulary(Question question, std::vector<std::string> terms)
    : question_(question) {
  if (terms.size() < 2) {
    throw Error(ErrorCode::InvalidVocabulary,
                "vocabulary for '" + std::string(to_string(question)) +
                    "' needs at least 2 terms, got " + std::to_string(terms.size()));
  }
  std::set<std::string> seen;
  for (auto& t : terms) {
    t = detail::trim(t);
    if (t.empty()) {
      throw Error(ErrorCode::InvalidVocabulary,
                  "empty term in vocabulary for '" + std::string(to_string(question)) + "'");
    }
    if (!seen.insert(detail::lower(t)).second) {
      throw Error(ErrorCode::DuplicateTerm, "duplicate term '" + t + "' in vocabulary for '" +
                                                std::string(to_string(question)) + "'");
    }
  }
  terms_ = std::move(terms);
}

std::size_t QuestionVocabulary::index_of(std::string_view term) const {
  const std::string key = detail::lower(detail::trim(term));
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (detail::lower(terms_[i]) == key) return i;
  }
  throw Error(ErrorCode::UnknownTerm, "unknown answer '" + std::string(term) +
                                          "' for question '" +
                                          std::string(to_string(question_)) + "'");
}

const QuestionVocabulary& SurveyVocabulary::operator[](Question q) const noexcept {
  switch (q) {
    case Question::Noise: return noise;
    case Question::Focus: return focus;
    case Question::Seated: break;
  }
  return seated;
}

SurveyVocabulary default_vocabulary() {
  return SurveyVocabulary{
      QuestionVocabulary(Question::Noise,
                         {"Silent", "Very quiet", "Quiet", "Moderate", "Talkative", "Loud",
                          "Constantly loud"}),
      QuestionVocabulary(Question::Focus,
                         {"Always focused", "Usually focused", "Often focused",
                          "Sometimes focused", "Often distracted", "Usually distracted",
                          "Always distracted"}),
      QuestionVocabulary(Question::Seated,
                         {"Always seated", "Almost always seated", "Usually seated",
                          "Often seated", "Sometimes seated", "Often out of seat",
                          "Usually out of seat", "Almost never seated", "Never seated"}),
  };
}

void validate_vocabulary(const SurveyVocabulary& vocab, std::size_t expected_rule_count) {
  // Per-question invariants are enforced by the QuestionVocabulary constructor.
  const auto s = vocab.sizes();
  const std::size_t product = s[0] * s[1] * s[2];
  if (product != expected_rule_count) {
    throw Error(ErrorCode::RuleCountMismatch,
                "vocabulary sizes " + std::to_string(s[0]) + "x" + std::to_string(s[1]) + "x" +
                    std::to_string(s[2]) + " give " + std::to_string(product) +
                    " rules, expected " + std::to_string(expected_rule_count));
  }
}

SurveyVocabulary parse_vocabulary_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("vocabulary JSON: ") + e.what());
  }
  auto read = [&](Question q) {
    const std::string key(to_string(q));
    if (!j.is_object() || !j.contains(key) || !j[key].is_array()) {
      throw Error(ErrorCode::Parse, "vocabulary JSON: missing array '" + key + "'");
    }
    std::vector<std::string> terms;
    for (const auto& t : j[key]) {
      if (!t.is_string()) {
        throw Error(ErrorCode::Parse, "vocabulary JSON: non-string term in '" + key + "'");
      }
      terms.push_back(t.get<std::string>());
    }
    return QuestionVocabulary(q, std::move(terms));
  };
  return SurveyVocabulary{read(Question::Noise), read(Question::Focus), read(Question::Seated)};
}

SurveyVocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open vocabulary file '" + path + "'");
  return parse_vocabulary_json(in);
}

const std::string& SurveyEntry::answer(Question q) const noexcept {
  switch (q) {
    case Question::Noise: return noise_answer;
    case Question::Focus: return focus_answer;
    case Question::Seated: break;
  }
  return seated_answer;
}

Roster parse_survey(std::istream& in, const SurveyVocabulary& vocab) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    const auto header = detail::split_csv_line(line);
    const std::vector<std::string> expected{"student_id", "noise", "focus", "seated"};
    if (header != expected) {
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) +
                      ": expected header 'student_id,noise,focus,seated'");
    }
    have_header = true;
  }
  if (!have_header) throw Error(ErrorCode::EmptyRoster, "survey has no header and no rows");

  Roster roster;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != 4) {
      throw Error(ErrorCode::MalformedRow, where + ": expected 4 columns, got " +
                                               std::to_string(cells.size()));
    }
    if (cells[0].empty()) throw Error(ErrorCode::MalformedRow, where + ": empty student_id");
    if (!ids.insert(cells[0]).second) {
      throw Error(ErrorCode::DuplicateStudentId, where + ": duplicate student_id '" + cells[0] + "'");
    }
    SurveyEntry entry{cells[0], {}, {}, {}};
    std::string* slots[] = {&entry.noise_answer, &entry.focus_answer, &entry.seated_answer};
    const Question questions[] = {Question::Noise, Question::Focus, Question::Seated};
    for (int q = 0; q < 3; ++q) {
      const auto& qv = vocab[questions[q]];
      try {
        *slots[q] = qv.terms()[qv.index_of(cells[q + 1])];
      } catch (const Error& e) {
        throw Error(e.code(), where + " (student '" + cells[0] + "'): " + e.what());
      }
    }
    roster.entries.push_back(std::move(entry));
  }
  if (roster.entries.empty()) throw Error(ErrorCode::EmptyRoster, "survey has no data rows");
  return roster;
}

double answer_to_crisp(const QuestionVocabulary& vocab, std::string_view term) {
  const auto idx = vocab.index_of(term);
  return static_cast<double>(idx) / static_cast<double>(vocab.size() - 1);
}

}  // namespace cub
