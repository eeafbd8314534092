#include "surfkit/wizard/knowledge_base.hpp"

#include "surfkit/error.hpp"

#include <algorithm>

namespace surfkit::wizard {
namespace {

bool unify(const Term& t, const Value& v, Binding& b) {
  if (t.constant) return *t.constant == v;
  if (t.variable.empty()) return true;
  auto [it, inserted] = b.try_emplace(t.variable, v);
  return inserted || it->second == v;
}

}  // namespace

KnowledgeBase::KnowledgeBase() = default;

bool KnowledgeBase::add(const Value& subject, const std::string& predicate, const Value& object) {
  if (!subject.is_symbol()) throw Error(Errc::ParseError, "triple subject must be a symbol");
  if (predicate.empty()) throw Error(Errc::ParseError, "triple predicate must be a symbol");
  if (holds(subject.text(), predicate, object)) return false;
  if (is_functional(predicate)) {
    if (const auto existing = this->object(subject.text(), predicate)) {
      throw Error(Errc::ConsistencyError, subject.text() + " " + predicate + " is already " + existing->to_kb() +
                                              ", cannot also be " + object.to_kb());
    }
  }
  const std::size_t id = triples_.size();
  triples_.push_back({subject, predicate, object});
  by_subject_[subject.text()].push_back(id);
  by_predicate_[predicate].push_back(id);
  by_object_[object.to_kb()].push_back(id);
  return true;
}

void KnowledgeBase::declare_functional(const std::string& predicate) {
  std::map<std::string, Value> seen;
  if (auto it = by_predicate_.find(predicate); it != by_predicate_.end()) {
    for (std::size_t id : it->second) {
      const auto& t = triples_[id];
      auto [pos, inserted] = seen.try_emplace(t.subject.text(), t.object);
      if (!inserted && !(pos->second == t.object))
        throw Error(Errc::ConsistencyError, "predicate " + predicate + " has two values for " + t.subject.text());
    }
  }
  functional_.insert(predicate);
}

void KnowledgeBase::add_rule(Rule rule) {
  for (const auto& r : rules_) {
    if (r.name == rule.name) throw Error(Errc::ConsistencyError, "rule '" + rule.name + "' declared twice");
  }
  rules_.push_back(std::move(rule));
}

void KnowledgeBase::add_workflow(WorkflowDef wf) {
  if (workflows_.count(wf.id)) throw Error(Errc::ConsistencyError, "workflow '" + wf.id + "' declared twice");
  const std::string id = wf.id;
  workflows_.emplace(id, std::move(wf));
}

const WorkflowDef& KnowledgeBase::workflow(const std::string& id) const {
  const auto it = workflows_.find(id);
  if (it == workflows_.end()) throw Error(Errc::NotFound, "no workflow '" + id + "'");
  return it->second;
}

std::vector<Binding> KnowledgeBase::query(const Term& s, const Term& p, const Term& o) const {
  // Narrowest index first.
  const std::vector<std::size_t>* candidates = nullptr;
  auto narrow = [&](const std::unordered_map<std::string, std::vector<std::size_t>>& index, const std::string& key) {
    static const std::vector<std::size_t> kEmpty;
    const auto it = index.find(key);
    const auto* list = it == index.end() ? &kEmpty : &it->second;
    if (!candidates || list->size() < candidates->size()) candidates = list;
  };
  if (s.constant) {
    if (!s.constant->is_symbol()) return {};
    narrow(by_subject_, s.constant->text());
  }
  if (p.constant) {
    if (!p.constant->is_symbol()) return {};
    narrow(by_predicate_, p.constant->text());
  }
  if (o.constant) narrow(by_object_, o.constant->to_kb());

  std::vector<Binding> out;
  auto visit = [&](const Triple& t) {
    Binding b;
    if (unify(s, t.subject, b) && unify(p, Value::symbol(t.predicate), b) && unify(o, t.object, b)) out.push_back(b);
  };
  if (candidates) {
    for (std::size_t id : *candidates) visit(triples_[id]);
  } else {
    for (const auto& t : triples_) visit(t);
  }
  return out;
}

std::vector<Value> KnowledgeBase::objects(const std::string& subject, const std::string& predicate) const {
  std::vector<Value> out;
  const auto it = by_subject_.find(subject);
  if (it == by_subject_.end()) return out;
  for (std::size_t id : it->second) {
    if (triples_[id].predicate == predicate) out.push_back(triples_[id].object);
  }
  return out;
}

std::optional<Value> KnowledgeBase::object(const std::string& subject, const std::string& predicate) const {
  auto all = objects(subject, predicate);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Value> KnowledgeBase::subjects(const std::string& predicate, const Value& object) const {
  std::vector<Value> out;
  const auto it = by_object_.find(object.to_kb());
  if (it == by_object_.end()) return out;
  for (std::size_t id : it->second) {
    if (triples_[id].predicate == predicate && triples_[id].object == object) out.push_back(triples_[id].subject);
  }
  return out;
}

bool KnowledgeBase::holds(const std::string& subject, const std::string& predicate, const Value& object) const {
  const auto it = by_subject_.find(subject);
  if (it == by_subject_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [&](std::size_t id) {
    return triples_[id].predicate == predicate && triples_[id].object == object;
  });
}

}  // namespace surfkit::wizard
