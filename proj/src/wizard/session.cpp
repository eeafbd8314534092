#include "surfkit/wizard/session.hpp"

#include "surfkit/error.hpp"
#include "surfkit/wizard/kb_parser.hpp"
#include "surfkit/wizard/rules.hpp"

#include <algorithm>
#include <cmath>

namespace surfkit::wizard {
namespace {

constexpr int kMaxTransitions = 10000;
constexpr const char* kDoneMessage = "All steps are complete.";

void say(WizardSession& s, std::string speaker, std::string text) {
  s.transcript.push_back({std::move(speaker), std::move(text)});
}

std::string substitute(const std::string& tmpl, const Belief& belief) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    const std::size_t close = open == std::string::npos ? std::string::npos : tmpl.find('}', open);
    if (close == std::string::npos) {
      out += tmpl.substr(pos);
      break;
    }
    out += tmpl.substr(pos, open - pos);
    const std::string key = tmpl.substr(open + 1, close - open - 1);
    const auto it = belief.find(key);
    out += it == belief.end() ? "unknown" : it->second.display();
    pos = close + 1;
  }
  return out;
}

std::optional<Dimension> dimension_of(const std::string& c) {
  if (c == "Length") return Dimension::Length;
  if (c == "Force") return Dimension::Force;
  if (c == "Angle") return Dimension::Angle;
  if (c == "Speed") return Dimension::Speed;
  if (c == "RotationalSpeed") return Dimension::RotationalSpeed;
  return std::nullopt;
}

Value belief_value_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number()) return Value::number(j.get<double>());
  if (j.is_string()) return parse_kb_value(j.get<std::string>());
  if (j.is_object()) return value_from_json(j);
  throw Error(Errc::ParseError, "malformed belief value " + j.dump());
}

}  // namespace

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::AwaitingUser: return "awaiting_user";
    case SessionStatus::AwaitingAction: return "awaiting_action";
    case SessionStatus::Done: return "done";
  }
  return "done";
}

SessionStatus session_status_from_string(std::string_view s) {
  if (s == "awaiting_user") return SessionStatus::AwaitingUser;
  if (s == "awaiting_action") return SessionStatus::AwaitingAction;
  if (s == "done") return SessionStatus::Done;
  throw Error(Errc::ParseError, "unknown session status '" + std::string(s) + "'");
}

nlohmann::json to_json(const ActionRequest& a) {
  return {{"name", a.name}, {"step", a.step}, {"sequence", a.sequence}};
}

nlohmann::json to_json(const ActionResult& r) {
  nlohmann::json belief = nlohmann::json::object();
  for (const auto& [k, v] : r.belief) belief[k] = v.to_kb();
  return {{"action", r.name}, {"ok", r.ok}, {"belief", belief}};
}

ActionResult action_result_from_json(const nlohmann::json& j) {
  try {
    ActionResult r;
    r.name = j.at("action").get<std::string>();
    r.ok = j.at("ok").get<bool>();
    if (j.contains("belief")) {
      for (const auto& [k, v] : j.at("belief").items()) r.belief[k] = belief_value_from_json(v);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed action result: ") + e.what());
  }
}

nlohmann::json to_json(const WizardSession& s) {
  nlohmann::json belief = nlohmann::json::object();
  for (const auto& [k, v] : s.belief) belief[k] = to_json(v);
  nlohmann::json transcript = nlohmann::json::array();
  for (const auto& t : s.transcript) transcript.push_back({{"speaker", t.speaker}, {"text", t.text}});
  nlohmann::json j = {{"id", s.id},
                      {"workflow", s.workflow},
                      {"belief", belief},
                      {"step", s.step},
                      {"action_done", s.action_done},
                      {"status", to_string(s.status)},
                      {"actions_emitted", s.actions_emitted},
                      {"transcript", transcript},
                      {"question", nullptr},
                      {"action", nullptr}};
  if (s.question)
    j["question"] = {{"key", s.question->key}, {"concept", s.question->concept_class}, {"prompt", s.question->prompt}};
  if (s.action) j["action"] = to_json(*s.action);
  return j;
}

WizardSession session_from_json(const nlohmann::json& j) {
  try {
    WizardSession s;
    s.id = j.at("id").get<std::string>();
    s.workflow = j.at("workflow").get<std::string>();
    for (const auto& [k, v] : j.at("belief").items()) s.belief[k] = value_from_json(v);
    s.step = j.at("step").get<std::string>();
    s.action_done = j.at("action_done").get<bool>();
    s.status = session_status_from_string(j.at("status").get<std::string>());
    s.actions_emitted = j.at("actions_emitted").get<std::size_t>();
    for (const auto& t : j.at("transcript")) s.transcript.push_back({t.at("speaker"), t.at("text")});
    if (!j.at("question").is_null()) {
      const auto& q = j["question"];
      s.question = PendingQuestion{q.at("key"), q.at("concept"), q.at("prompt")};
    }
    if (!j.at("action").is_null()) {
      const auto& a = j["action"];
      s.action = ActionRequest{a.at("name"), a.at("step"), a.at("sequence").get<std::size_t>()};
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed session: ") + e.what());
  }
}

Wizard::Wizard(const KnowledgeBase& kb, std::string workflow_id)
    : kb_(kb), lexicon_(Lexicon::from_kb(kb)), workflow_id_(std::move(workflow_id)) {
  kb_.workflow(workflow_id_);
}

WizardSession Wizard::create_session(std::string id) const {
  WizardSession s;
  s.id = std::move(id);
  s.workflow = workflow_id_;
  enter(s, kb_.workflow(workflow_id_).start);
  settle(s);
  return s;
}

bool Wizard::fits_range(const std::string& key, const Value& v) const {
  const auto range = kb_.object(key, "range");
  if (!range) return true;
  const std::string& c = range->text();
  if (c == "Boolean") return v.kind() == Value::Kind::Boolean;
  if (c == "Count") return v.kind() == Value::Kind::Number && v.number() >= 0 && std::floor(v.number()) == v.number();
  if (c == "Number") return v.kind() == Value::Kind::Number;
  if (const auto dim = dimension_of(c)) return v.kind() == Value::Kind::Quantity && v.quantity().dimension == *dim;
  return v.is_symbol() && kb_.holds(v.text(), "type", Value::symbol(c));
}

std::vector<std::string> Wizard::ask_keys(const std::string& step) const {
  std::vector<std::string> keys;
  for (const Triple& t : kb_.triples()) {
    if (t.subject.text() != step || !(t.predicate == "asks" || t.predicate == "requires_param")) continue;
    if (std::find(keys.begin(), keys.end(), t.object.text()) == keys.end()) keys.push_back(t.object.text());
  }
  return keys;
}

PendingQuestion Wizard::question_for(const WizardSession& s, const std::string& key) const {
  PendingQuestion q;
  q.key = key;
  const auto range = kb_.object(key, "range");
  if (!range) throw Error(Errc::ConsistencyError, "belief key '" + key + "' has no declared range");
  q.concept_class = range->text();
  const auto prompt = kb_.object(key, "prompt");
  q.prompt = prompt ? substitute(prompt->text(), s.belief) : "Please provide " + split_camel_case(key) + ".";
  return q;
}

void Wizard::enter(WizardSession& s, const std::string& step) const {
  s.step = step;
  s.action_done = false;
  for (const Value& k : kb_.objects(step, "asks")) s.belief.erase(k.text());
  for (const Value& k : kb_.objects(step, "decrements")) {
    const auto it = s.belief.find(k.text());
    if (it != s.belief.end() && it->second.kind() == Value::Kind::Number)
      it->second = Value::number(std::max(0.0, it->second.number() - 1.0));
  }
}

void Wizard::derive_belief(WizardSession& s) const {
  const auto task = s.belief.find("task");
  const auto material = s.belief.find("material");
  const bool grounded = task != s.belief.end() && material != s.belief.end();
  if (grounded && kb_.holds(s.step, "derives", Value::symbol("tool")) && !s.belief.count("tool")) {
    const auto tools = derive(kb_, "has_tool", {Term::lit(task->second), Term::var("?tool")});
    const auto fits = derive(kb_, "compatible_material", {Term::var("?tool"), Term::lit(material->second)});
    for (const Tuple& t : tools) {
      const bool ok = std::any_of(fits.begin(), fits.end(), [&](const Tuple& f) { return f[0] == t[1]; });
      if (ok) {
        s.belief["tool"] = t[1];
        break;
      }
    }
  }
  if (grounded && kb_.holds(s.step, "loads", Value::symbol("default_param"))) {
    const auto params = derive(kb_, "default_param",
                               {Term::lit(task->second), Term::lit(material->second), Term::var("?k"), Term::var("?v")});
    for (const Tuple& t : params) {
      const std::string key = t[2].text();
      if (!s.belief.count(key)) s.belief[key] = t[3];
    }
  }
  for (const Triple& t : kb_.triples()) {
    if (t.predicate != "initial_from") continue;
    const auto src = s.belief.find(t.object.text());
    if (src != s.belief.end() && !s.belief.count(t.subject.text())) s.belief[t.subject.text()] = src->second;
  }
}

void Wizard::settle(WizardSession& s) const {
  s.question.reset();
  s.action.reset();
  for (int i = 0; i < kMaxTransitions; ++i) {
    if (s.step == kDone) {
      s.status = SessionStatus::Done;
      say(s, "wizard", kDoneMessage);
      return;
    }
    derive_belief(s);
    for (const std::string& key : ask_keys(s.step)) {
      if (s.belief.count(key)) continue;
      s.question = question_for(s, key);
      s.status = SessionStatus::AwaitingUser;
      say(s, "wizard", s.question->prompt);
      return;
    }
    if (!s.action_done) {
      if (const auto name = kb_.object(s.step, "performs")) {
        s.action = ActionRequest{name->text(), s.step, ++s.actions_emitted};
        s.status = SessionStatus::AwaitingAction;
        say(s, "action", to_json(*s.action).dump());
        return;
      }
    }
    enter(s, next_task(kb_, s.workflow, s.step, s.belief));
  }
  throw Error(Errc::ConsistencyError, "workflow " + s.workflow + " makes no progress from " + s.step);
}

void Wizard::answer(WizardSession& s, std::string_view utterance) const {
  if (s.status != SessionStatus::AwaitingUser || !s.question)
    throw Error(Errc::ProtocolError, std::string("session is ") + std::string(to_string(s.status)) + ", not awaiting user input");
  say(s, "user", std::string(utterance));
  Grounding g = ground_concept(utterance, s.question->concept_class, lexicon_, kb_);
  s.last_grounding = g;
  if (!g.ok() || !fits_range(s.question->key, *g.value)) {
    say(s, "wizard", s.question->prompt);
    return;
  }
  s.belief[s.question->key] = *g.value;
  settle(s);
}

void Wizard::deliver(WizardSession& s, const ActionResult& result) const {
  if (s.status != SessionStatus::AwaitingAction || !s.action)
    throw Error(Errc::ProtocolError, std::string("session is ") + std::string(to_string(s.status)) + ", not awaiting an action result");
  if (result.name != s.action->name)
    throw Error(Errc::ProtocolError, "expected a result for '" + s.action->name + "', got '" + result.name + "'");
  for (const auto& [k, v] : result.belief) {
    if (!kb_.holds(k, "type", Value::symbol("BeliefKey")))
      throw Error(Errc::ProtocolError, "action result sets undeclared belief key '" + k + "'");
    if (!fits_range(k, v)) throw Error(Errc::ProtocolError, "value " + v.to_kb() + " does not fit the range of '" + k + "'");
  }
  say(s, "result", to_json(result).dump());
  for (const auto& [k, v] : result.belief) s.belief[k] = v;
  s.belief[result.name + "_ok"] = Value::boolean(result.ok);
  s.action_done = true;
  settle(s);
}

void Wizard::step(WizardSession& s, const WizardInput& input) const {
  if (const auto* text = std::get_if<std::string>(&input)) {
    answer(s, *text);
  } else {
    deliver(s, std::get<ActionResult>(input));
  }
}

}  // namespace surfkit::wizard
