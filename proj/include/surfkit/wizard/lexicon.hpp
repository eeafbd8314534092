#pragma once

#include "surfkit/wizard/knowledge_base.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace surfkit::wizard {

/// Lowercase, punctuation to spaces, whitespace collapsed.
std::string normalize(std::string_view text);
std::vector<std::string> tokenize(std::string_view normalized);

/// Unrestricted Damerau-Levenshtein distance (adjacent transpositions may
/// be edited further).
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);
/// 1 - d / max(|a|, |b|); 1 for two empty strings.
double similarity(std::string_view a, std::string_view b);

/// "OrbitalSander" -> "orbital sander".
std::string split_camel_case(std::string_view symbol);

struct SurfaceForm {
  std::string text;  // normalized
  bool synonym = false;
};

/// Surface forms per concept symbol, built from `label` and `synonym`
/// triples. Concepts without a label get their split symbol name.
class Lexicon {
 public:
  static Lexicon from_kb(const KnowledgeBase& kb);

  void add(const std::string& concept_name, const std::string& text, bool synonym);
  /// Label first, then synonyms in declaration order. Empty if unknown.
  const std::vector<SurfaceForm>& forms(const std::string& concept_name) const;
  std::string primary_form(const std::string& concept_name) const;

 private:
  std::map<std::string, std::vector<SurfaceForm>> forms_;
};

}  // namespace surfkit::wizard
