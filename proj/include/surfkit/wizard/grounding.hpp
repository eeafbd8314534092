#pragma once

#include "surfkit/wizard/knowledge_base.hpp"
#include "surfkit/wizard/lexicon.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace surfkit::wizard {

enum class MatchStage { Exact, Synonym, Fuzzy, Literal, NoMatch };
std::string_view to_string(MatchStage s);

inline constexpr double kFuzzyThreshold = 0.8;

struct Grounding {
  std::optional<Value> value;  // empty on NoMatch
  MatchStage stage = MatchStage::NoMatch;
  double score = 0.0;
  std::string matched;  // n-gram or literal text that won

  bool ok() const { return value.has_value(); }
};

/// True for the typed literal slots: Length, Force, Angle, Speed,
/// RotationalSpeed, Count, Number, Boolean.
bool is_literal_class(const std::string& concept_class);

/// Resolves an utterance to an instance of `concept_class` ("Material":
/// any `x type Material`) or to a literal of that class. Symbol classes
/// try exact labels, then synonyms, then fuzzy matching over every n-gram
/// of the utterance; the longest matching n-gram wins and a tie between
/// concepts is NoMatch.
Grounding ground_concept(std::string_view utterance, const std::string& concept_class, const Lexicon& lexicon,
                         const KnowledgeBase& kb);

}  // namespace surfkit::wizard
