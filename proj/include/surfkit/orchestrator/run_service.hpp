#pragma once

#include "surfkit/error.hpp"
#include "surfkit/orchestrator/manifest.hpp"
#include "surfkit/wizard/knowledge_base.hpp"
#include "surfkit/wizard/session.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surfkit::orchestrator {

/// A pipeline stage raised an error. The stage is recorded as failed and
/// the run can be advanced again.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunServiceOptions {
  std::filesystem::path data_dir;
  /// Knowledge base file; the built-in one when empty.
  std::filesystem::path kb_path;
  /// Called at named points ("locked", "stage-start:plan", "prepared",
  /// "committed", ...). Tests use it to interrupt a run.
  std::function<void(std::string_view)> fault_hook;
};

struct RunView {
  RunManifest manifest;
  wizard::WizardSession session;
};

/// Run lifecycle on top of a data directory. Each run lives in
/// data_dir/runs/<id>/. Mutations of one run are serialized by an
/// exclusive file lock; a second concurrent mutation fails with Conflict.
/// Every change is committed by renaming manifest.json into place after
/// the new artifacts were staged as "<file>.pending"; staged files are
/// moved into place afterwards or on the next mutation.
class RunService {
 public:
  explicit RunService(RunServiceOptions options);

  /// Throws MissingInput when no cloud is given or the file is absent.
  RunView create(const RunInputs& inputs, const RunConfig& config);
  /// Throws NotFound.
  RunView get(const std::string& id) const;
  std::vector<std::string> list() const;
  /// Moves or drops staged files left by an interrupted commit in every
  /// run that is not locked. Returns the number of runs visited.
  std::size_t recover();

  /// Passes a user utterance to the wizard. Throws ProtocolError, Conflict.
  RunView answer(const std::string& id, std::string_view utterance);
  /// Executes the pending action, or delivers `external` in its place.
  /// Throws ProtocolError (done run, awaiting user), Conflict, StageError.
  RunView advance(const std::string& id, const std::optional<wizard::ActionResult>& external = std::nullopt);
  /// Repeats advance while an action is pending.
  RunView advance_until_input(const std::string& id);

  /// Artifact bytes after digest verification. Throws NotFound,
  /// IntegrityError.
  std::string artifact(const std::string& id, std::string_view kind) const;

  std::filesystem::path run_dir(const std::string& id) const;
  const wizard::KnowledgeBase& kb() const { return *kb_; }

 private:
  class Lock;
  struct Loaded;

  Loaded load(const std::string& id) const;
  void commit(const std::string& id, RunManifest& m, const wizard::WizardSession& s,
              const std::vector<std::pair<std::string, std::string>>& artifacts) const;
  void hook(std::string_view point) const;

  RunServiceOptions options_;
  std::shared_ptr<const wizard::KnowledgeBase> kb_;
  std::string kb_sha256_;
  std::unique_ptr<wizard::Wizard> wizard_;
};

/// Stage that a wizard action or approval key belongs to; empty if none.
std::string_view stage_for_action(std::string_view action);
std::string_view stage_for_answer(std::string_view belief_key);

}  // namespace surfkit::orchestrator
