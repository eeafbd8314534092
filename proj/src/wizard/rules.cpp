#include "surfkit/wizard/rules.hpp"

#include "surfkit/error.hpp"
#include "surfkit/wizard/kb_parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace surfkit::wizard {
namespace {

constexpr std::string_view kBuiltin = R"(has_tool: has_tool(?task, ?tool) :- requires(?task, ?c), capableOf(?tool, ?c).
compatible_material: compatible_material(?tool, ?m) :- suitableFor(?tool, ?m).
default_param: default_param(?task, ?m, ?k, ?v) :- forTask(?p, ?task), forMaterial(?p, ?m), hasParameter(?p, ?x), paramKey(?x, ?k), paramValue(?x, ?v).
)";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Term parse_term(std::string_view tok) {
  tok = trim(tok);
  if (tok.empty()) throw Error(Errc::ParseError, "empty rule argument");
  if (tok.front() == '?') {
    if (tok.size() == 1) throw Error(Errc::ParseError, "unnamed rule variable");
    return Term::var(std::string(tok));
  }
  return Term::lit(parse_kb_value(tok));
}

// Parses atoms "p(a, b), q(c)" starting at pos; stops at end of text.
std::vector<Atom> parse_atoms(std::string_view s) {
  std::vector<Atom> atoms;
  std::size_t pos = 0;
  while (true) {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ',')) ++pos;
    if (pos >= s.size()) break;
    const std::size_t open = s.find('(', pos);
    if (open == std::string_view::npos) throw Error(Errc::ParseError, "expected '(' in rule atom");
    Atom a;
    a.predicate = std::string(trim(s.substr(pos, open - pos)));
    if (a.predicate.empty()) throw Error(Errc::ParseError, "rule atom without predicate");
    std::size_t i = open + 1, start = i;
    bool quoted = false;
    for (; i < s.size(); ++i) {
      if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
      if (quoted) continue;
      if (s[i] == ',' || s[i] == ')') {
        a.args.push_back(parse_term(s.substr(start, i - start)));
        start = i + 1;
        if (s[i] == ')') break;
      }
    }
    if (i >= s.size()) throw Error(Errc::ParseError, "unterminated rule atom");
    atoms.push_back(std::move(a));
    pos = i + 1;
  }
  return atoms;
}

struct Facts {
  std::map<std::string, std::vector<Tuple>> rows;
  std::map<std::string, std::set<Tuple>> seen;

  bool insert(const std::string& predicate, Tuple t) {
    if (!seen[predicate].insert(t).second) return false;
    rows[predicate].push_back(std::move(t));
    return true;
  }
};

bool match_args(const std::vector<Term>& args, const Tuple& row, Binding& b) {
  if (args.size() != row.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Term& t = args[i];
    if (t.constant) {
      if (!(*t.constant == row[i])) return false;
    } else if (!t.variable.empty()) {
      auto [it, inserted] = b.try_emplace(t.variable, row[i]);
      if (!inserted && !(it->second == row[i])) return false;
    }
  }
  return true;
}

void join(const Rule& rule, std::size_t depth, Binding& b, const Facts& facts, std::vector<Tuple>& out) {
  if (depth == rule.body.size()) {
    Tuple head;
    for (const auto& t : rule.head.args) {
      if (t.constant) {
        head.push_back(*t.constant);
      } else {
        const auto it = b.find(t.variable);
        if (it == b.end()) return;  // unsafe head variable
        head.push_back(it->second);
      }
    }
    out.push_back(std::move(head));
    return;
  }
  const Atom& atom = rule.body[depth];
  const auto it = facts.rows.find(atom.predicate);
  if (it == facts.rows.end()) return;
  const std::vector<Tuple> rows = it->second;  // the relation may grow while we iterate
  for (const auto& row : rows) {
    Binding next = b;
    if (match_args(atom.args, row, next)) join(rule, depth + 1, next, facts, out);
  }
}

}  // namespace

std::string_view builtin_rules_text() { return kBuiltin; }

const std::vector<Rule>& builtin_rules() {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> out;
    std::string_view text = kBuiltin;
    while (!text.empty()) {
      const std::size_t nl = text.find('\n');
      const std::string_view line = trim(text.substr(0, nl));
      if (!line.empty()) out.push_back(parse_rule(line));
      if (nl == std::string_view::npos) break;
      text.remove_prefix(nl + 1);
    }
    return out;
  }();
  return rules;
}

Rule parse_rule(std::string_view text) {
  text = trim(text);
  if (text.empty() || text.back() != '.') throw Error(Errc::ParseError, "rule must end with '.'");
  text.remove_suffix(1);
  const std::size_t colon = text.find(':');
  const std::size_t arrow = text.find(":-");
  if (colon == std::string_view::npos || colon == arrow) throw Error(Errc::ParseError, "rule needs 'name:'");
  if (arrow == std::string_view::npos) throw Error(Errc::ParseError, "rule needs ':-'");
  Rule r;
  r.name = std::string(trim(text.substr(0, colon)));
  if (r.name.empty()) throw Error(Errc::ParseError, "rule name is empty");
  const auto head = parse_atoms(text.substr(colon + 1, arrow - colon - 1));
  if (head.size() != 1) throw Error(Errc::ParseError, "rule needs exactly one head atom");
  r.head = head.front();
  r.body = parse_atoms(text.substr(arrow + 2));
  if (r.body.empty()) throw Error(Errc::ParseError, "rule body is empty");
  return r;
}

std::vector<Tuple> derive(const KnowledgeBase& kb, const std::string& predicate, const std::vector<Term>& args) {
  std::vector<const Rule*> rules;
  for (const auto& r : builtin_rules()) rules.push_back(&r);
  for (const auto& r : kb.rules()) rules.push_back(&r);
  bool known = false;
  for (const Rule* r : rules) known = known || r->head.predicate == predicate;
  if (!known) throw Error(Errc::UnknownRule, "no rule concludes '" + predicate + "'");

  Facts facts;
  for (const auto& t : kb.triples()) facts.insert(t.predicate, {t.subject, t.object});
  for (bool changed = true; changed;) {
    changed = false;
    for (const Rule* r : rules) {
      std::vector<Tuple> produced;
      Binding b;
      join(*r, 0, b, facts, produced);
      for (auto& t : produced) changed = facts.insert(r->head.predicate, std::move(t)) || changed;
    }
  }

  std::vector<Tuple> out;
  const auto it = facts.rows.find(predicate);
  if (it == facts.rows.end()) return out;
  for (const auto& row : it->second) {
    std::vector<Term> padded = args;
    if (padded.size() < row.size()) padded.resize(row.size(), Term::any());
    Binding b;
    if (match_args(padded, row, b)) out.push_back(row);
  }
  return out;
}

}  // namespace surfkit::wizard
