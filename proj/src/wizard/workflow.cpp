#include "surfkit/wizard/workflow.hpp"

#include "surfkit/error.hpp"

#include <cmath>
#include <set>

namespace surfkit::wizard {
namespace {

bool evaluate_atom(const GuardAtom& a, const Belief& belief) {
  const auto it = belief.find(a.key);
  if (it == belief.end()) return false;
  const Value& v = it->second;
  const auto lhs = v.numeric();
  const auto rhs = a.literal.numeric();
  switch (a.op) {
    case GuardOp::Eq: return lhs && rhs ? *lhs == *rhs : v == a.literal;
    case GuardOp::Ne: return lhs && rhs ? *lhs != *rhs : !(v == a.literal);
    case GuardOp::Lt: return lhs && rhs && *lhs < *rhs;
    case GuardOp::Gt: return lhs && rhs && *lhs > *rhs;
  }
  return false;
}

}  // namespace

std::string_view to_string(GuardOp op) {
  switch (op) {
    case GuardOp::Eq: return "=";
    case GuardOp::Ne: return "!=";
    case GuardOp::Lt: return "<";
    case GuardOp::Gt: return ">";
  }
  return "=";
}

bool evaluate_guard(const std::vector<GuardAtom>& guard, const Belief& belief) {
  for (const auto& a : guard) {
    if (!evaluate_atom(a, belief)) return false;
  }
  return true;
}

std::string next_task(const KnowledgeBase& kb, const std::string& workflow_id, const std::string& current,
                      const Belief& belief) {
  const WorkflowDef& wf = kb.workflow(workflow_id);
  if (current == kDone) return kDone;
  std::vector<const Edge*> outgoing, taken;
  for (const auto& e : wf.edges) {
    if (e.from != current) continue;
    outgoing.push_back(&e);
    if (evaluate_guard(e.guard, belief)) taken.push_back(&e);
  }
  if (outgoing.empty()) {
    bool known = false;
    for (const auto& s : wf.steps) known = known || s == current;
    if (!known) throw Error(Errc::NotFound, "step '" + current + "' is not part of workflow " + workflow_id);
    return kDone;
  }
  if (taken.size() > 1) {
    std::string targets;
    for (const Edge* e : taken) targets += (targets.empty() ? "" : ", ") + e->to;
    throw Error(Errc::AmbiguousSuccessor, "several successors of " + current + " hold: " + targets);
  }
  if (taken.empty()) throw Error(Errc::NoSuccessor, "no successor guard of " + current + " holds");
  return taken.front()->to;
}

void validate_workflow(const KnowledgeBase& kb, const WorkflowDef& wf) {
  if (wf.start.empty()) throw Error(Errc::ConsistencyError, "workflow " + wf.id + " has no start step");
  for (const auto& e : wf.edges) {
    for (const auto& a : e.guard) {
      if (!kb.holds(a.key, "type", Value::symbol("BeliefKey")))
        throw Error(Errc::ConsistencyError,
                    "workflow " + wf.id + ": guard on " + e.from + " -> " + e.to + " uses undeclared key '" + a.key + "'");
    }
  }
  std::set<std::string> reached{wf.start};
  std::vector<std::string> frontier{wf.start};
  bool terminal = false;
  while (!frontier.empty()) {
    const std::string s = frontier.back();
    frontier.pop_back();
    for (const auto& e : wf.edges) {
      if (e.from != s) continue;
      if (e.to == kDone) {
        terminal = true;
        continue;
      }
      if (reached.insert(e.to).second) frontier.push_back(e.to);
    }
  }
  for (const auto& s : wf.steps) {
    if (!reached.count(s)) throw Error(Errc::ConsistencyError, "workflow " + wf.id + ": step " + s + " is unreachable");
  }
  if (!terminal) throw Error(Errc::ConsistencyError, "workflow " + wf.id + " never reaches Done");
}

std::vector<ModelCheckIssue> model_check(const KnowledgeBase& kb, const std::string& workflow_id) {
  const WorkflowDef& wf = kb.workflow(workflow_id);
  std::vector<ModelCheckIssue> issues;
  for (const auto& step : wf.steps) {
    std::map<std::string, std::vector<Value>> domains;
    for (const auto& e : wf.edges) {
      if (e.from != step) continue;
      for (const auto& a : e.guard) {
        auto& d = domains[a.key];
        auto add = [&d](const Value& v) {
          for (const auto& x : d) {
            if (x == v) return;
          }
          d.push_back(v);
        };
        if (a.literal.kind() == Value::Kind::Boolean) {
          add(Value::boolean(false));
          add(Value::boolean(true));
        } else if (const auto n = a.literal.numeric()) {
          // Count keys only take non-negative integers.
          const bool count = kb.holds(a.key, "range", Value::symbol("Count"));
          for (double delta : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const double v = *n + delta;
            if (count && (v < 0.0 || v != std::floor(v))) continue;
            add(Value::number(v));
          }
        } else {
          add(a.literal);
          add(Value::symbol("__unseen__"));
        }
      }
    }
    std::vector<std::pair<std::string, std::vector<Value>>> keys(domains.begin(), domains.end());
    std::vector<std::size_t> pick(keys.size(), 0);
    while (true) {
      Belief b;
      for (std::size_t i = 0; i < keys.size(); ++i) b[keys[i].first] = keys[i].second[pick[i]];
      try {
        next_task(kb, workflow_id, step, b);
      } catch (const Error& e) {
        issues.push_back({step, b, e.code()});
      }
      std::size_t i = 0;
      while (i < keys.size() && ++pick[i] == keys[i].second.size()) pick[i++] = 0;
      if (i == keys.size()) break;
    }
  }
  return issues;
}

}  // namespace surfkit::wizard
