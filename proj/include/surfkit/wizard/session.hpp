#pragma once

#include "surfkit/wizard/grounding.hpp"
#include "surfkit/wizard/knowledge_base.hpp"
#include "surfkit/wizard/lexicon.hpp"
#include "surfkit/wizard/workflow.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace surfkit::wizard {

enum class SessionStatus { AwaitingUser, AwaitingAction, Done };
std::string_view to_string(SessionStatus s);
SessionStatus session_status_from_string(std::string_view s);

struct PendingQuestion {
  std::string key;
  std::string concept_class;  // range of the key
  std::string prompt;
};

struct ActionRequest {
  std::string name;
  std::string step;
  std::size_t sequence = 0;  // 1-based count of actions emitted so far
};

struct ActionResult {
  std::string name;
  bool ok = false;
  Belief belief;  // merged into the session belief
};

struct TranscriptEntry {
  std::string speaker;  // wizard, user, action, result
  std::string text;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct WizardSession {
  std::string id;
  std::string workflow;
  Belief belief;
  std::string step;
  bool action_done = false;
  std::optional<PendingQuestion> question;
  std::optional<ActionRequest> action;
  std::vector<TranscriptEntry> transcript;
  SessionStatus status = SessionStatus::AwaitingUser;
  std::size_t actions_emitted = 0;
  std::optional<Grounding> last_grounding;
};

using WizardInput = std::variant<std::string, ActionResult>;

nlohmann::json to_json(const ActionRequest& a);
nlohmann::json to_json(const ActionResult& r);
/// Accepts {"action", "ok", "belief": {key: "<kb literal>" | number | bool}}.
ActionResult action_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WizardSession& s);
WizardSession session_from_json(const nlohmann::json& j);

/// Dialog engine over one knowledge base and workflow. Step behavior is
/// read from the KB:
///
///   Step asks key            cleared on entry, always asked
///   Step requires_param key  asked while the key is unset
///   Step performs action     emitted once per entry
///   Step derives tool        first has_tool of the task compatible with the material
///   Step loads default_param parameter set of (task, material)
///   Step decrements key      key -= 1 on entry
///   key initial_from other   copied once `other` is set
///   key range Class          grounding target
///   key prompt "text {k}"    question text with belief substitution
///
/// An action result sets `<action>_ok` and merges the reported belief.
class Wizard {
 public:
  explicit Wizard(const KnowledgeBase& kb, std::string workflow_id = "SurfaceTreatment");

  WizardSession create_session(std::string id) const;

  /// Grounds the utterance against the pending question. On NoMatch the
  /// same prompt is emitted again. Throws ProtocolError unless awaiting
  /// user input.
  void answer(WizardSession& s, std::string_view utterance) const;
  /// Throws ProtocolError unless awaiting an action of the same name, or
  /// when a reported belief value does not fit the key's range.
  void deliver(WizardSession& s, const ActionResult& result) const;
  void step(WizardSession& s, const WizardInput& input) const;

  const KnowledgeBase& kb() const { return kb_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const std::string& workflow_id() const { return workflow_id_; }

  /// Whether `v` fits the declared range of `key` (undeclared keys accept
  /// anything).
  bool fits_range(const std::string& key, const Value& v) const;

 private:
  void settle(WizardSession& s) const;
  void enter(WizardSession& s, const std::string& step) const;
  void derive_belief(WizardSession& s) const;
  std::vector<std::string> ask_keys(const std::string& step) const;
  PendingQuestion question_for(const WizardSession& s, const std::string& key) const;

  const KnowledgeBase& kb_;
  Lexicon lexicon_;
  std::string workflow_id_;
};

}  // namespace surfkit::wizard
