#include "surfkit/wizard/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace surfkit::wizard {

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool space = true;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      out += static_cast<char>(std::tolower(c));
      space = false;
    } else if (!space) {
      out += ' ';
      space = true;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::size_t sp = normalized.find(' ', pos);
    const std::size_t end = sp == std::string_view::npos ? normalized.size() : sp;
    if (end > pos) out.emplace_back(normalized.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  const std::size_t inf = n + m;
  // Lowrance-Wagner with a last-row table over byte values.
  std::vector<std::size_t> last_row(256, 0);
  std::vector<std::vector<std::size_t>> d(n + 2, std::vector<std::size_t>(m + 2, 0));
  d[0][0] = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    d[i + 1][0] = inf;
    d[i + 1][1] = i;
  }
  for (std::size_t j = 0; j <= m; ++j) {
    d[0][j + 1] = inf;
    d[1][j + 1] = j;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t last_match_col = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t i1 = last_row[static_cast<unsigned char>(b[j - 1])];
      const std::size_t j1 = last_match_col;
      std::size_t cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_match_col = j;
      }
      d[i + 1][j + 1] = std::min({d[i][j] + cost, d[i + 1][j] + 1, d[i][j + 1] + 1,
                                  d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[static_cast<unsigned char>(a[i - 1])] = i;
  }
  return d[n + 1][m + 1];
}

double similarity(std::string_view a, std::string_view b) {
  const std::size_t len = std::max(a.size(), b.size());
  if (len == 0) return 1.0;
  return 1.0 - static_cast<double>(damerau_levenshtein(a, b)) / static_cast<double>(len);
}

std::string split_camel_case(std::string_view symbol) {
  std::string out;
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const auto c = static_cast<unsigned char>(symbol[i]);
    if (std::isupper(c) && i > 0 && !std::isupper(static_cast<unsigned char>(symbol[i - 1]))) out += ' ';
    out += static_cast<char>(std::tolower(c));
  }
  return normalize(out);
}

Lexicon Lexicon::from_kb(const KnowledgeBase& kb) {
  Lexicon lex;
  std::set<std::string> labelled;
  for (const Triple& t : kb.triples()) {
    if (t.predicate == "label" && t.object.kind() == Value::Kind::String) {
      lex.add(t.subject.text(), t.object.text(), false);
      labelled.insert(t.subject.text());
    }
  }
  for (const Triple& t : kb.triples()) {
    if (!labelled.count(t.subject.text())) {
      lex.add(t.subject.text(), split_camel_case(t.subject.text()), false);
      labelled.insert(t.subject.text());
    }
    if (t.predicate == "synonym" && t.object.kind() == Value::Kind::String) lex.add(t.subject.text(), t.object.text(), true);
  }
  return lex;
}

void Lexicon::add(const std::string& concept_name, const std::string& text, bool synonym) {
  auto& list = forms_[concept_name];
  const std::string norm = normalize(text);
  if (norm.empty()) return;
  for (const auto& f : list) {
    if (f.text == norm) return;
  }
  SurfaceForm form{norm, synonym};
  if (!synonym) {
    // The label stays in front so primary_form is stable.
    const auto first_synonym = std::find_if(list.begin(), list.end(), [](const SurfaceForm& f) { return f.synonym; });
    list.insert(first_synonym, std::move(form));
  } else {
    list.push_back(std::move(form));
  }
}

const std::vector<SurfaceForm>& Lexicon::forms(const std::string& concept_name) const {
  static const std::vector<SurfaceForm> kEmpty;
  const auto it = forms_.find(concept_name);
  return it == forms_.end() ? kEmpty : it->second;
}

std::string Lexicon::primary_form(const std::string& concept_name) const {
  const auto& f = forms(concept_name);
  return f.empty() ? split_camel_case(concept_name) : f.front().text;
}

}  // namespace surfkit::wizard
