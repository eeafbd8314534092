#pragma once

#include "surfkit/wizard/value.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace surfkit::wizard {

struct Triple {
  Value subject;  // always a symbol
  std::string predicate;
  Value object;
};

/// A pattern position: a constant or a named variable ("?x").
struct Term {
  std::optional<Value> constant;
  std::string variable;

  static Term var(std::string name) { return {std::nullopt, std::move(name)}; }
  static Term sym(std::string name) { return {Value::symbol(std::move(name)), {}}; }
  static Term lit(Value v) { return {std::move(v), {}}; }
  static Term any() { return {std::nullopt, {}}; }
  bool is_variable() const { return !constant.has_value(); }
};

using Binding = std::map<std::string, Value>;

struct Atom {
  std::string predicate;
  std::vector<Term> args;
};

/// head :- body[0], body[1], ... over binary facts and derived relations.
struct Rule {
  std::string name;
  Atom head;
  std::vector<Atom> body;
};

enum class GuardOp { Eq, Ne, Lt, Gt };

struct GuardAtom {
  std::string key;
  GuardOp op = GuardOp::Eq;
  Value literal;
};

struct Edge {
  std::string from;
  std::string to;
  std::vector<GuardAtom> guard;  // conjunction; empty = always
};

inline constexpr const char* kDone = "Done";

struct WorkflowDef {
  std::string id;
  std::string start;
  std::vector<std::string> steps;  // declaration order, Done excluded
  std::vector<Edge> edges;
};

/// Indexed triple store plus the rule and workflow declarations that came
/// with it. Triples keep insertion order; duplicates are dropped.
class KnowledgeBase {
 public:
  KnowledgeBase();

  /// Adds a triple. Returns false for an exact duplicate. Throws
  /// ConsistencyError when a functional predicate already has a different
  /// object for this subject.
  bool add(const Value& subject, const std::string& predicate, const Value& object);
  bool add(const std::string& subject, const std::string& predicate, const Value& object) {
    return add(Value::symbol(subject), predicate, object);
  }
  void declare_functional(const std::string& predicate);
  bool is_functional(const std::string& predicate) const { return functional_.count(predicate) > 0; }

  void add_rule(Rule rule);
  void add_workflow(WorkflowDef wf);

  const std::vector<Triple>& triples() const { return triples_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::map<std::string, WorkflowDef>& workflows() const { return workflows_; }
  const WorkflowDef& workflow(const std::string& id) const;

  /// Matches (s, p, o) against the stored triples in insertion order. Each
  /// result binds the pattern's named variables; a fully ground pattern
  /// that holds yields one empty binding.
  std::vector<Binding> query(const Term& s, const Term& p, const Term& o) const;

  /// Objects of (subject, predicate) in insertion order.
  std::vector<Value> objects(const std::string& subject, const std::string& predicate) const;
  std::optional<Value> object(const std::string& subject, const std::string& predicate) const;
  /// Subjects of (predicate, object) in insertion order.
  std::vector<Value> subjects(const std::string& predicate, const Value& object) const;
  bool holds(const std::string& subject, const std::string& predicate, const Value& object) const;

  bool empty() const { return triples_.empty(); }

 private:
  std::vector<Triple> triples_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_predicate_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_object_;
  std::set<std::string> functional_;
  std::vector<Rule> rules_;
  std::map<std::string, WorkflowDef> workflows_;
};

}  // namespace surfkit::wizard
