#include "surfkit/wizard/grounding.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace surfkit::wizard {
namespace {

std::optional<Dimension> literal_dimension(const std::string& c) {
  if (c == "Length") return Dimension::Length;
  if (c == "Force") return Dimension::Force;
  if (c == "Angle") return Dimension::Angle;
  if (c == "Speed") return Dimension::Speed;
  if (c == "RotationalSpeed") return Dimension::RotationalSpeed;
  return std::nullopt;
}

std::vector<std::string> raw_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  for (auto& t : out) {
    while (!t.empty() && (t.back() == ',' || t.back() == '.' || t.back() == '!' || t.back() == '?' || t.back() == ';'))
      t.pop_back();
  }
  return out;
}

Grounding literal(Value v, MatchStage stage, std::string matched) {
  Grounding g;
  g.value = std::move(v);
  g.stage = stage;
  g.score = 1.0;
  g.matched = std::move(matched);
  return g;
}

Grounding ground_quantity(std::string_view utterance, Dimension dim) {
  const auto tokens = raw_tokens(utterance);
  std::vector<std::pair<Quantity, std::string>> found;
  auto attempt = [&](const std::string& text) {
    try {
      Quantity q = parse_quantity(text);
      if (q.dimension == dim) found.emplace_back(std::move(q), text);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size() && attempt(tokens[i] + " " + tokens[i + 1])) {
      ++i;
      continue;
    }
    attempt(tokens[i]);
  }
  if (found.empty()) return {};
  for (const auto& f : found) {
    if (f.first.canonical != found.front().first.canonical) return {};
  }
  return literal(Value::quantity(found.front().first), MatchStage::Literal, found.front().second);
}

std::optional<double> number_token(const std::string& t) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Grounding ground_number(std::string_view utterance, bool integral) {
  std::optional<double> found;
  std::string matched;
  for (const auto& t : raw_tokens(utterance)) {
    const auto v = number_token(t);
    if (!v) continue;
    if (found && *found != *v) return {};
    found = v;
    matched = t;
  }
  if (!found) return {};
  if (integral && (*found < 0 || std::floor(*found) != *found)) return {};
  return literal(Value::number(*found), MatchStage::Literal, matched);
}

Grounding ground_boolean(std::string_view utterance) {
  static const std::set<std::string> kYes = {"yes", "y", "approve", "approved", "ok", "okay", "true"};
  static const std::set<std::string> kNo = {"no", "n", "reject", "rejected", "false"};
  bool yes = false, no = false;
  std::string matched;
  for (const auto& t : tokenize(normalize(utterance))) {
    if (kYes.count(t)) {
      yes = true;
      matched = t;
    }
    if (kNo.count(t)) {
      no = true;
      matched = t;
    }
  }
  if (yes == no) return {};
  return literal(Value::boolean(yes), MatchStage::Literal, matched);
}

struct Candidate {
  std::string concept_name;
  double score = 0.0;
  std::size_t ngram_len = 0;
  std::string matched;
};

// Best candidate under (highest score, longest n-gram); ties between
// distinct concepts at the top spot yield nothing.
std::optional<Candidate> unique_best(const std::vector<Candidate>& cands) {
  const Candidate* best = &cands.front();
  for (const auto& c : cands) {
    if (c.score > best->score || (c.score == best->score && c.ngram_len > best->ngram_len)) best = &c;
  }
  for (const auto& c : cands) {
    if (c.concept_name != best->concept_name && c.ngram_len == best->ngram_len && c.score == best->score)
      return std::nullopt;
  }
  return *best;
}

}  // namespace

std::string_view to_string(MatchStage s) {
  switch (s) {
    case MatchStage::Exact: return "exact";
    case MatchStage::Synonym: return "synonym";
    case MatchStage::Fuzzy: return "fuzzy";
    case MatchStage::Literal: return "literal";
    case MatchStage::NoMatch: return "no_match";
  }
  return "no_match";
}

bool is_literal_class(const std::string& c) {
  return literal_dimension(c).has_value() || c == "Count" || c == "Number" || c == "Boolean";
}

Grounding ground_concept(std::string_view utterance, const std::string& concept_class, const Lexicon& lexicon,
                         const KnowledgeBase& kb) {
  if (const auto dim = literal_dimension(concept_class)) return ground_quantity(utterance, *dim);
  if (concept_class == "Count") return ground_number(utterance, true);
  if (concept_class == "Number") return ground_number(utterance, false);
  if (concept_class == "Boolean") return ground_boolean(utterance);

  const auto tokens = tokenize(normalize(utterance));
  std::vector<std::string> ngrams;
  std::vector<std::size_t> lengths;
  for (std::size_t len = tokens.size(); len >= 1; --len) {
    for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (std::size_t j = i + 1; j < i + len; ++j) g += " " + tokens[j];
      ngrams.push_back(std::move(g));
      lengths.push_back(len);
    }
  }
  const auto instances = kb.subjects("type", Value::symbol(concept_class));

  auto stage = [&](MatchStage which) {
    std::vector<Candidate> cands;
    for (const Value& inst : instances) {
      for (const SurfaceForm& form : lexicon.forms(inst.text())) {
        if (which == MatchStage::Exact && form.synonym) continue;
        if (which == MatchStage::Synonym && !form.synonym) continue;
        for (std::size_t k = 0; k < ngrams.size(); ++k) {
          const double s = which == MatchStage::Fuzzy ? similarity(ngrams[k], form.text) : (ngrams[k] == form.text ? 1.0 : 0.0);
          if (which == MatchStage::Fuzzy ? s >= kFuzzyThreshold : s == 1.0)
            cands.push_back({inst.text(), s, lengths[k], ngrams[k]});
        }
      }
    }
    return cands;
  };

  for (MatchStage which : {MatchStage::Exact, MatchStage::Synonym, MatchStage::Fuzzy}) {
    const auto cands = stage(which);
    if (cands.empty()) continue;
    if (auto best = unique_best(cands)) {
      Grounding g;
      g.value = Value::symbol(best->concept_name);
      g.stage = which;
      g.score = best->score;
      g.matched = best->matched;
      return g;
    }
    return {};
  }
  return {};
}

}  // namespace surfkit::wizard
