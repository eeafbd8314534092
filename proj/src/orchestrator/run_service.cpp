#include "surfkit/orchestrator/run_service.hpp"

#include "surfkit/control/gains.hpp"
#include "surfkit/control/serialization.hpp"
#include "surfkit/control/simulation.hpp"
#include "surfkit/geometry/cloud_io.hpp"
#include "surfkit/geometry/cloud_ops.hpp"
#include "surfkit/orchestrator/artifact_store.hpp"
#include "surfkit/perception/defects.hpp"
#include "surfkit/perception/outliers.hpp"
#include "surfkit/perception/serialization.hpp"
#include "surfkit/planner/plan.hpp"
#include "surfkit/planner/serialization.hpp"
#include "surfkit/wizard/kb_parser.hpp"
#include "surfkit/wizard/transcript.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <regex>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace surfkit::orchestrator {

namespace fs = std::filesystem;
using nlohmann::json;
using wizard::Value;

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kSessionFile = "session.json";

bool valid_run_id(const std::string& id) {
  static const std::regex kUuid("^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$");
  return std::regex_match(id, kUuid);
}

double belief_number(const wizard::Belief& b, const std::string& key) {
  const auto it = b.find(key);
  if (it == b.end() || !it->second.numeric())
    throw Error(Errc::MissingInput, "belief has no numeric value for '" + key + "'");
  return *it->second.numeric();
}

// MAE reported to the wizard, rounded so it prints and re-parses exactly.
Value mae_value(double mae) {
  wizard::Quantity q;
  q.value = std::round(mae * 1e4) / 1e4;
  q.unit = "N";
  q.canonical = q.value;
  q.dimension = wizard::Dimension::Force;
  return Value::quantity(q);
}

json wizard_summary(const wizard::WizardSession& s) {
  json j = {{"status", wizard::to_string(s.status)}, {"step", s.step}, {"question", nullptr}, {"action", nullptr}};
  if (s.question) j["question"] = {{"key", s.question->key}, {"concept", s.question->concept_class}, {"prompt", s.question->prompt}};
  if (s.action) j["action"] = wizard::to_json(*s.action);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void roll_forward(const fs::path& dir, const RunManifest& m) {
  std::vector<ArtifactRef> refs;
  for (const auto& [k, r] : m.artifacts) refs.push_back(r);
  refs.push_back(m.session);
  for (const auto& r : refs) {
    const fs::path file = dir / r.file;
    const fs::path pending = pending_path(file);
    std::error_code ec;
    if (!fs::exists(pending, ec)) continue;
    if (sha256_hex(read_file(pending)) == r.sha256) {
      fs::rename(pending, file, ec);
      if (ec) throw Error(Errc::IoError, "cannot move " + pending.string() + " into place: " + ec.message());
    } else {
      fs::remove(pending, ec);
    }
  }
  // Staged files of a commit that never happened.
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".pending" || entry.path().extension() == ".tmp") fs::remove(entry.path(), ec);
  }
}

struct StageOutput {
  std::vector<std::pair<std::string, std::string>> artifacts;  // kind, bytes
  wizard::ActionResult result;
};

struct StageContext {
  fs::path dir;
  const RunManifest& manifest;
  const wizard::WizardSession& session;
  RunConfig config;
  RunInputs inputs;

  std::string verified(const std::string& kind) const {
    const auto it = manifest.artifacts.find(kind);
    if (it == manifest.artifacts.end()) throw Error(Errc::MissingInput, "run has no " + kind + " artifact yet");
    return read_verified(dir / it->second.file, it->second.sha256);
  }

  geom::PointCloud cloud() const {
    const auto it = manifest.artifacts.find("cloud");
    if (it == manifest.artifacts.end()) throw Error(Errc::MissingInput, "run has no cloud artifact yet");
    read_verified(dir / it->second.file, it->second.sha256);
    return geom::load_cloud(dir / it->second.file, geom::CloudFormat::Ply, geom::LengthUnit::Meter);
  }

  // The cloud the planner and the contact model see: SOR inliers only.
  geom::PointCloud treated_cloud() const {
    const geom::PointCloud raw = cloud();
    const auto sor = perception::statistical_outlier_removal(raw, config.perception.sor_k, config.perception.sor_multiplier);
    return geom::select(raw, sor.inliers);
  }
};

StageOutput run_scan(const StageContext& ctx) {
  geom::PointCloud cloud;
  if (ctx.inputs.synthetic) {
    cloud = perception::make_synthetic_scan(*ctx.inputs.synthetic).cloud;
  } else {
    const fs::path src = *ctx.inputs.cloud;
    std::error_code ec;
    if (!fs::exists(src, ec)) throw Error(Errc::MissingInput, "input cloud " + src.string() + " is gone");
    if (sha256_hex(read_file(src)) != ctx.manifest.inputs.value("cloud_sha256", ""))
      throw Error(Errc::IntegrityError, "input cloud " + src.string() + " changed since the run was created");
    std::optional<geom::LengthUnit> unit;
    if (ctx.inputs.cloud_unit) {
      if (*ctx.inputs.cloud_unit == "mm") {
        unit = geom::LengthUnit::Millimeter;
      } else if (*ctx.inputs.cloud_unit == "m") {
        unit = geom::LengthUnit::Meter;
      } else {
        throw Error(Errc::UnitError, "cloud unit must be mm or m");
      }
    }
    cloud = geom::load_cloud(src, geom::format_from_extension(src), unit);
  }
  if (cloud.empty()) throw Error(Errc::EmptyCloud, "input cloud has no points");
  const fs::path build = ctx.dir / "cloud.ply.build";
  geom::save_cloud(cloud, build, geom::CloudFormat::Ply);
  std::string bytes = read_file(build);
  std::error_code ec;
  fs::remove(build, ec);
  return {{{"cloud", std::move(bytes)}}, {"scan", true, {}}};
}

StageOutput run_detect(const StageContext& ctx) {
  const auto report = perception::detect_defects(ctx.cloud(), ctx.config.perception);
  wizard::Belief b{{"defect_count", Value::number(static_cast<double>(report.regions.size()))}};
  return {{{"defects", dump(perception::to_json(report))}}, {"detect_defects", true, b}};
}

StageOutput run_plan(const StageContext& ctx) {
  planner::PlannerConfig cfg = ctx.config.planner;
  if (ctx.session.belief.count("angle_of_attack")) cfg.angle_of_attack_deg = belief_number(ctx.session.belief, "angle_of_attack");
  const auto result = planner::plan_path(ctx.treated_cloud(), cfg);
  wizard::Belief b{{"waypoint_count", Value::number(static_cast<double>(result.path.waypoints.size()))}};
  return {{{"path", dump(planner::to_json(result.path, result.metrics))}}, {"plan_path", true, b}};
}

StageOutput run_control(const StageContext& ctx, bool execution) {
  const planner::ToolPath path = planner::tool_path_from_json(json::parse(ctx.verified("path")));
  const geom::PointCloud cloud = ctx.treated_cloud();
  const control::HeightField surface(cloud, path.frame, 2.0 * geom::median_spacing(cloud));
  const auto region = control::WrenchRegion::normal_force(belief_number(ctx.session.belief, "contact_force"));
  control::PlantConfig plant = ctx.config.plant;
  if (execution) {
    plant.vibration = ctx.config.execution_vibration;
  } else {
    plant.noise_sigma = 0.0;
    plant.vibration = {};
  }
  const auto gains = control::tune_gains_default(plant, region);
  const auto sim = control::simulate_execution(path, region, gains, plant, ctx.config.seed, surface);

  json metrics = json::object();
  if (ctx.manifest.artifacts.count("metrics")) metrics = json::parse(ctx.verified("metrics"));
  metrics[execution ? "execution" : "simulation"] = {{"metrics", control::to_json(sim.metrics)},
                                                     {"region", control::to_json(region)},
                                                     {"gains", control::to_json(gains)},
                                                     {"plant", control::to_json(plant)}};
  const std::string action = execution ? "execute" : "simulate";
  wizard::Belief b{{"last_mae", mae_value(sim.metrics.mae)}};
  return {{{execution ? "trajectory" : "trajectory_sim", control::trajectory_csv(sim.trajectory)}, {"metrics", dump(metrics)}},
          {action, sim.trajectory.success, b}};
}

StageOutput run_stage(std::string_view action, const StageContext& ctx) {
  if (action == "scan") return run_scan(ctx);
  if (action == "detect_defects") return run_detect(ctx);
  if (action == "plan_path") return run_plan(ctx);
  if (action == "simulate") return run_control(ctx, false);
  if (action == "execute") return run_control(ctx, true);
  throw Error(Errc::ProtocolError, "no handler for action '" + std::string(action) + "'");
}

std::string failure_reason(const std::string& action, const json& metrics_artifact) {
  const char* key = action == "execute" ? "execution" : "simulation";
  if (metrics_artifact.contains(key)) {
    const auto& m = metrics_artifact[key]["metrics"];
    if (m.contains("failure_reason") && m["failure_reason"].is_string() && !m["failure_reason"].get<std::string>().empty())
      return m["failure_reason"].get<std::string>();
  }
  return action + " reported failure";
}

void reset_downstream(RunManifest& m, std::string_view stage) {
  bool after = false;
  for (auto name : kStages) {
    if (after) {
      auto& s = m.stage(name);
      s.status = StageStatus::Pending;
      s.reason.clear();
    }
    if (name == stage) after = true;
  }
}

}  // namespace

std::string_view stage_for_action(std::string_view action) {
  if (action == "scan") return "scan-ingest";
  if (action == "detect_defects") return "defect-detect";
  if (action == "plan_path") return "plan";
  if (action == "simulate") return "simulate";
  if (action == "execute") return "execute";
  return {};
}

std::string_view stage_for_answer(std::string_view key) {
  if (key == "simulation_approved") return "validate";
  if (key == "qc_approved") return "qc";
  return {};
}

class RunService::Lock {
 public:
  Lock(const fs::path& dir, const RunService& svc) {
    const fs::path file = dir / ".lock";
    fd_ = ::open(file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(Errc::IoError, "cannot open lock file " + file.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      const int err = errno;
      ::close(fd_);
      if (err == EWOULDBLOCK) throw Error(Errc::Conflict, "another request is modifying this run");
      throw Error(Errc::IoError, "cannot lock " + file.string());
    }
    svc.hook("locked");
  }
  ~Lock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  Lock(const Lock&) = delete;
  Lock& operator=(const Lock&) = delete;

 private:
  int fd_ = -1;
};

struct RunService::Loaded {
  RunManifest manifest;
  wizard::WizardSession session;
};

RunService::RunService(RunServiceOptions options) : options_(std::move(options)) {
  std::string text;
  if (options_.kb_path.empty()) {
    text = std::string(wizard::default_kb_text());
    kb_ = std::shared_ptr<const wizard::KnowledgeBase>(&wizard::default_kb(), [](const wizard::KnowledgeBase*) {});
  } else {
    text = read_file(options_.kb_path);
    kb_ = std::make_shared<const wizard::KnowledgeBase>(wizard::parse_kb(text, options_.kb_path.string()));
  }
  kb_sha256_ = sha256_hex(text);
  wizard_ = std::make_unique<wizard::Wizard>(*kb_);
  std::error_code ec;
  fs::create_directories(options_.data_dir / "runs", ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + (options_.data_dir / "runs").string() + ": " + ec.message());
}

fs::path RunService::run_dir(const std::string& id) const { return options_.data_dir / "runs" / id; }

void RunService::hook(std::string_view point) const {
  if (options_.fault_hook) options_.fault_hook(point);
}

RunService::Loaded RunService::load(const std::string& id) const {
  const fs::path dir = run_dir(id);
  std::error_code ec;
  if (!valid_run_id(id) || !fs::exists(dir / kManifestFile, ec)) throw Error(Errc::NotFound, "no run " + id);
  json mj;
  try {
    mj = json::parse(read_file(dir / kManifestFile));
  } catch (const json::exception& e) {
    throw Error(Errc::IntegrityError, std::string("unreadable manifest: ") + e.what());
  }
  Loaded l{manifest_from_json(mj), {}};
  const std::string session_bytes = read_verified(dir / l.manifest.session.file, l.manifest.session.sha256);
  l.session = wizard::session_from_json(json::parse(session_bytes));
  return l;
}

void RunService::commit(const std::string& id, RunManifest& m, const wizard::WizardSession& s,
                        const std::vector<std::pair<std::string, std::string>>& artifacts) const {
  const fs::path dir = run_dir(id);
  auto stage_file = [&](const std::string& file, const std::string& bytes) {
    atomic_write(pending_path(dir / file), bytes);
    return ArtifactRef{file, sha256_hex(bytes), bytes.size()};
  };
  for (const auto& [kind, bytes] : artifacts) m.artifacts[kind] = stage_file(std::string(artifact_file(kind)), bytes);
  m.artifacts["transcript"] = stage_file(std::string(artifact_file("transcript")), wizard::format_transcript(s.transcript));
  m.session = stage_file(kSessionFile, dump(wizard::to_json(s)));
  m.wizard = wizard_summary(s);
  ++m.revision;
  hook("prepared");
  atomic_write(dir / kManifestFile, dump(to_json(m)));
  hook("committed");
  roll_forward(dir, m);
}

RunView RunService::create(const RunInputs& inputs, const RunConfig& config) {
  json input_json = to_json(inputs);
  if (inputs.cloud && inputs.synthetic) throw Error(Errc::InvalidParameter, "give either a cloud file or a synthetic scan");
  if (inputs.cloud) {
    std::error_code ec;
    if (!fs::is_regular_file(*inputs.cloud, ec)) throw Error(Errc::MissingInput, "input cloud " + inputs.cloud->string() + " does not exist");
    input_json["cloud"] = fs::absolute(*inputs.cloud).lexically_normal().string();
    input_json["cloud_sha256"] = sha256_hex(read_file(*inputs.cloud));
  } else if (!inputs.synthetic) {
    throw Error(Errc::MissingInput, "a run needs an input cloud or a synthetic scan");
  }
  config.perception.validate();
  config.planner.validate();
  config.plant.validate();

  RunManifest m;
  do {
    m.id = make_run_id();
  } while (fs::exists(run_dir(m.id)));
  const fs::path dir = run_dir(m.id);
  fs::create_directories(dir);
  m.created_at = utc_timestamp();
  m.inputs = input_json;
  m.config = to_json(config);
  m.config["kb_sha256"] = kb_sha256_;
  for (auto name : kStages) m.stages.push_back({std::string(name), StageStatus::Pending, {}, 0});

  Lock lock(dir, *this);
  wizard::WizardSession s = wizard_->create_session(m.id);
  commit(m.id, m, s, {});
  return {std::move(m), std::move(s)};
}

RunView RunService::get(const std::string& id) const {
  Loaded l = load(id);
  return {std::move(l.manifest), std::move(l.session)};
}

std::vector<std::string> RunService::list() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(options_.data_dir / "runs", ec)) {
    const std::string id = entry.path().filename().string();
    if (valid_run_id(id) && fs::exists(entry.path() / kManifestFile)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t RunService::recover() {
  std::size_t visited = 0;
  for (const auto& id : list()) {
    const fs::path dir = run_dir(id);
    try {
      Lock lock(dir, *this);
      roll_forward(dir, manifest_from_json(json::parse(read_file(dir / kManifestFile))));
      ++visited;
    } catch (const Error& e) {
      if (e.code() != Errc::Conflict) throw;
    }
  }
  return visited;
}

RunView RunService::answer(const std::string& id, std::string_view utterance) {
  const fs::path dir = run_dir(id);
  load(id);
  Lock lock(dir, *this);
  {
    const json mj = json::parse(read_file(dir / kManifestFile));
    roll_forward(dir, manifest_from_json(mj));
  }
  Loaded l = load(id);
  if (l.session.status != wizard::SessionStatus::AwaitingUser)
    throw Error(Errc::ProtocolError, std::string("run is ") + std::string(wizard::to_string(l.session.status)) + ", not awaiting user input");
  const std::string key = l.session.question->key;
  wizard_->answer(l.session, utterance);
  const auto stage = stage_for_answer(key);
  const auto it = l.session.belief.find(key);
  if (!stage.empty() && it != l.session.belief.end() && it->second.kind() == Value::Kind::Boolean) {
    StageState& st = l.manifest.stage(stage);
    ++st.attempts;
    reset_downstream(l.manifest, stage);
    if (it->second.boolean()) {
      st.status = StageStatus::Ok;
      st.reason.clear();
    } else {
      st.status = StageStatus::Failed;
      st.reason = "rejected by user";
    }
  }
  commit(id, l.manifest, l.session, {});
  return {std::move(l.manifest), std::move(l.session)};
}

RunView RunService::advance(const std::string& id, const std::optional<wizard::ActionResult>& external) {
  const fs::path dir = run_dir(id);
  load(id);
  Lock lock(dir, *this);
  {
    const json mj = json::parse(read_file(dir / kManifestFile));
    roll_forward(dir, manifest_from_json(mj));
  }
  Loaded l = load(id);
  if (l.session.status == wizard::SessionStatus::Done) throw Error(Errc::ProtocolError, "run is done");
  if (l.session.status != wizard::SessionStatus::AwaitingAction)
    throw Error(Errc::ProtocolError, "run is awaiting user input, not an action");
  const std::string action = l.session.action->name;
  const std::string stage(stage_for_action(action));
  if (stage.empty()) throw Error(Errc::ProtocolError, "no stage for action '" + action + "'");

  StageState& st = l.manifest.stage(stage);
  st.status = StageStatus::Running;
  st.reason.clear();
  ++st.attempts;
  reset_downstream(l.manifest, stage);
  commit(id, l.manifest, l.session, {});
  hook("stage-start:" + stage);

  StageOutput out;
  if (external) {
    out.result = *external;
  } else {
    try {
      StageContext ctx{dir, l.manifest, l.session, run_config_from_json(l.manifest.config),
                       run_inputs_from_json(l.manifest.inputs)};
      out = run_stage(action, ctx);
    } catch (const Error& e) {
      StageState& failed = l.manifest.stage(stage);
      failed.status = StageStatus::Failed;
      failed.reason = std::string(to_string(e.code())) + ": " + e.what();
      commit(id, l.manifest, l.session, {});
      throw StageError(stage, e);
    } catch (const std::exception& e) {
      const Error wrapped(Errc::IoError, e.what());
      StageState& failed = l.manifest.stage(stage);
      failed.status = StageStatus::Failed;
      failed.reason = std::string("IoError: ") + e.what();
      commit(id, l.manifest, l.session, {});
      throw StageError(stage, wrapped);
    }
  }
  hook("stage-done:" + stage);

  wizard_->deliver(l.session, out.result);
  StageState& done = l.manifest.stage(stage);
  if (out.result.ok) {
    done.status = StageStatus::Ok;
  } else {
    done.status = StageStatus::Failed;
    json metrics = json::object();
    for (const auto& [kind, bytes] : out.artifacts) {
      if (kind == "metrics") metrics = json::parse(bytes);
    }
    done.reason = failure_reason(action, metrics);
  }
  commit(id, l.manifest, l.session, out.artifacts);
  return {std::move(l.manifest), std::move(l.session)};
}

RunView RunService::advance_until_input(const std::string& id) {
  RunView v = get(id);
  while (v.session.status == wizard::SessionStatus::AwaitingAction) v = advance(id);
  return v;
}

std::string RunService::artifact(const std::string& id, std::string_view kind) const {
  const fs::path file(artifact_file(kind));
  const Loaded l = load(id);
  const auto it = l.manifest.artifacts.find(std::string(kind));
  if (it == l.manifest.artifacts.end()) throw Error(Errc::NotFound, "run " + id + " has no " + std::string(kind) + " artifact");
  return read_verified(run_dir(id) / it->second.file, it->second.sha256);
}

}  // namespace surfkit::orchestrator
