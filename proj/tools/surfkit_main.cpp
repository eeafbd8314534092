#include "surfkit/control/gains.hpp"
#include "surfkit/control/serialization.hpp"
#include "surfkit/control/simulation.hpp"
#include "surfkit/geometry/cloud_io.hpp"
#include "surfkit/geometry/cloud_ops.hpp"
#include "surfkit/orchestrator/artifact_store.hpp"
#include "surfkit/orchestrator/http_api.hpp"
#include "surfkit/orchestrator/run_service.hpp"
#include "surfkit/perception/defects.hpp"
#include "surfkit/perception/outliers.hpp"
#include "surfkit/perception/serialization.hpp"
#include "surfkit/planner/plan.hpp"
#include "surfkit/planner/serialization.hpp"
#include "surfkit/wizard/transcript.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace surfkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStage = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    json j = json::parse(orchestrator::read_file(path));
    if (!j.is_object()) throw Error(Errc::ParseError, path + ": config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

orchestrator::RunConfig run_config(const Common& c) {
  orchestrator::RunConfig cfg = orchestrator::run_config_from_json(load_config_file(c.config_path));
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  orchestrator::atomic_write(path, text);
}

geom::PointCloud read_cloud(const std::string& path, const std::string& unit) {
  std::optional<geom::LengthUnit> u;
  if (unit == "mm") u = geom::LengthUnit::Millimeter;
  if (unit == "m") u = geom::LengthUnit::Meter;
  if (!unit.empty() && !u) throw Error(Errc::UnitError, "unit must be mm or m");
  if (!fs::exists(path)) throw Error(Errc::MissingInput, "no such file " + path);
  return geom::load_cloud(path, geom::format_from_extension(path), u);
}

geom::PointCloud sor_inliers(const geom::PointCloud& cloud, const perception::PerceptionConfig& cfg) {
  return geom::select(cloud, perception::statistical_outlier_removal(cloud, cfg.sor_k, cfg.sor_multiplier).inliers);
}

void print_prompt(const wizard::WizardSession& s, std::size_t& shown) {
  for (; shown < s.transcript.size(); ++shown) {
    const auto& e = s.transcript[shown];
    if (e.speaker == "user") continue;
    std::cout << e.speaker << ": " << e.text << "\n";
  }
  std::cout.flush();
}

orchestrator::RunInputs run_inputs(const json& file_cfg, const std::string& cloud, const std::string& unit) {
  orchestrator::RunInputs in;
  if (file_cfg.contains("inputs")) in = orchestrator::run_inputs_from_json(file_cfg["inputs"]);
  if (!cloud.empty()) {
    in.cloud = cloud;
    in.synthetic.reset();
  }
  if (!unit.empty()) in.cloud_unit = unit;
  return in;
}

int finish_run(const orchestrator::RunService& svc, const std::string& id) {
  const auto v = svc.get(id);
  std::cout << "run " << id << " " << wizard::to_string(v.session.status) << "\n";
  for (const auto& st : v.manifest.stages) {
    std::cout << "  " << st.name << ": " << orchestrator::to_string(st.status);
    if (!st.reason.empty()) std::cout << " (" << st.reason << ")";
    std::cout << "\n";
  }
  std::cout << "manifest " << (svc.run_dir(id) / "manifest.json").string() << "\n";
  if (v.session.status == wizard::SessionStatus::Done) return kExitOk;
  for (const auto& st : v.manifest.stages) {
    if (st.status == orchestrator::StageStatus::Failed) return kExitStage;
  }
  return kExitUsage;
}

std::atomic<orchestrator::ApiServer*> g_server{nullptr};

void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surfkit: scan, detect, plan and simulate surface treatment"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", common.seed, "Random seed");
    cmd->add_option("--out", common.out, "Output file or directory");
  };

  auto* scan = app.add_subcommand("scan", "Create or import a point cloud");
  scan->require_subcommand(1);
  auto* gen = scan->add_subcommand("gen", "Generate a synthetic scan");
  add_common(gen);
  std::string kind = "cylinder";
  double size_s = 0.2, size_y = 0.15, spacing = 1e-3, noise = 2e-5;
  std::size_t spurious = 0;
  gen->add_option("--kind", kind, "plane or cylinder")->check(CLI::IsMember({"plane", "cylinder"}));
  gen->add_option("--size-s", size_s, "Extent across the curvature, m");
  gen->add_option("--size-y", size_y, "Extent along the axis, m");
  gen->add_option("--spacing", spacing, "Point spacing, m");
  gen->add_option("--noise", noise, "Noise sigma, m");
  gen->add_option("--spurious", spurious, "Points floating above the surface");

  auto* import = scan->add_subcommand("import", "Convert a cloud file to binary PLY in meters");
  add_common(import);
  std::string input, unit;
  import->add_option("input", input, "xyz or ply file")->required();
  import->add_option("--unit", unit, "Override the file unit (mm or m)");

  auto* detect = app.add_subcommand("detect", "Detect surface defects");
  add_common(detect);
  detect->add_option("cloud", input, "Cloud file")->required();
  detect->add_option("--unit", unit, "Override the file unit (mm or m)");

  auto* plan = app.add_subcommand("plan", "Plan a meander tool path");
  add_common(plan);
  plan->add_option("cloud", input, "Cloud file")->required();
  plan->add_option("--unit", unit, "Override the file unit (mm or m)");

  auto* simulate = app.add_subcommand("simulate", "Simulate force-controlled execution of a path");
  add_common(simulate);
  std::string path_file;
  double force = 5.0;
  bool execution = false;
  simulate->add_option("path", path_file, "path.json from plan")->required();
  simulate->add_option("--cloud", input, "Cloud the path was planned on")->required();
  simulate->add_option("--unit", unit, "Override the file unit (mm or m)");
  simulate->add_option("--force", force, "Contact force setpoint, N");
  simulate->add_flag("--execution", execution, "Sensor noise and vibration on");

  auto* wiz = app.add_subcommand("wizard", "Interactive dialog that drives a run");
  add_common(wiz);
  wiz->add_option("--cloud", input, "Input cloud (else the config's inputs)");
  wiz->add_option("--unit", unit, "Override the file unit (mm or m)");

  auto* run = app.add_subcommand("run", "End-to-end run answering from a transcript");
  add_common(run);
  std::string transcript_path;
  run->add_option("--transcript", transcript_path, "Transcript whose user lines are replayed")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--cloud", input, "Input cloud (else the config's inputs)");
  run->add_option("--unit", unit, "Override the file unit (mm or m)");

  auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
  add_common(serve);
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port, 0 for any");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Errors raised while a pipeline stage computes exit with 2; everything
  // before that (bad files, bad config) is a usage error.
  bool in_stage = false;
  try {
    if (*gen) {
      const json file_cfg = load_config_file(common.config_path);
      perception::SyntheticScanSpec spec;
      if (file_cfg.contains("inputs") && file_cfg["inputs"].contains("synthetic")) {
        spec = perception::scan_spec_from_json(file_cfg["inputs"]["synthetic"]);
      } else {
        spec.kind = kind == "plane" ? perception::SurfaceKind::Plane : perception::SurfaceKind::CylinderPatch;
        spec.size_s = size_s;
        spec.size_y = size_y;
        spec.spacing = spacing;
        spec.noise_sigma = noise;
        spec.spurious_points = spurious;
      }
      if (common.seed) spec.seed = *common.seed;
      const auto scan_out = perception::make_synthetic_scan(spec);
      const std::string out = common.out.empty() ? "scan.ply" : common.out;
      geom::save_cloud(scan_out.cloud, out, geom::format_from_extension(out));
      std::cout << scan_out.cloud.size() << " points written to " << out << "\n";
      return kExitOk;
    }
    if (*import) {
      const auto cloud = read_cloud(input, unit);
      const std::string out = common.out.empty() ? "cloud.ply" : common.out;
      geom::save_cloud(cloud, out, geom::CloudFormat::Ply);
      std::cout << cloud.size() << " points written to " << out << "\n";
      return kExitOk;
    }
    if (*detect) {
      const auto cfg = run_config(common);
      const auto cloud = read_cloud(input, unit);
      in_stage = true;
      const auto report = perception::detect_defects(cloud, cfg.perception);
      write_text(common.out, perception::to_json(report).dump(2) + "\n");
      return kExitOk;
    }
    if (*plan) {
      const auto cfg = run_config(common);
      const auto cloud = read_cloud(input, unit);
      in_stage = true;
      const auto result = planner::plan_path(sor_inliers(cloud, cfg.perception), cfg.planner);
      write_text(common.out, planner::to_json(result.path, result.metrics).dump(2) + "\n");
      return kExitOk;
    }
    if (*simulate) {
      const auto cfg = run_config(common);
      const auto cloud = sor_inliers(read_cloud(input, unit), cfg.perception);
      const auto path = planner::tool_path_from_json(json::parse(orchestrator::read_file(path_file)));
      in_stage = true;
      const control::HeightField surface(cloud, path.frame, 2.0 * geom::median_spacing(cloud));
      const auto region = control::WrenchRegion::normal_force(force);
      control::PlantConfig plant = cfg.plant;
      if (execution) {
        plant.vibration = cfg.execution_vibration;
      } else {
        plant.noise_sigma = 0.0;
        plant.vibration = {};
      }
      const auto gains = control::tune_gains_default(plant, region);
      const auto sim = control::simulate_execution(path, region, gains, plant, cfg.seed, surface);
      const fs::path dir = common.out.empty() ? fs::path(".") : fs::path(common.out);
      fs::create_directories(dir);
      orchestrator::atomic_write(dir / "trajectory.csv", control::trajectory_csv(sim.trajectory));
      orchestrator::atomic_write(dir / "metrics.json", control::to_json(sim.metrics).dump(2) + "\n");
      std::cout << control::to_json(sim.metrics).dump(2) << "\n";
      return sim.trajectory.success ? kExitOk : kExitStage;
    }

    const fs::path data_dir = common.out.empty() ? fs::path("surfkit-data") : fs::path(common.out);
    if (*serve) {
      orchestrator::RunService svc({data_dir, {}, {}});
      svc.recover();
      orchestrator::ApiServer server(svc);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << "/v1" << std::endl;
      server.listen();
      g_server = nullptr;
      return kExitOk;
    }

    const json file_cfg = load_config_file(common.config_path);
    orchestrator::RunService svc({data_dir, {}, {}});
    const auto view = svc.create(run_inputs(file_cfg, input, unit), run_config(common));
    const std::string id = view.manifest.id;
    std::size_t shown = 0;
    if (*run) {
      const auto entries = wizard::parse_transcript(orchestrator::read_file(transcript_path));
      std::size_t next = 0;
      while (true) {
        auto v = svc.advance_until_input(id);
        in_stage = false;
        if (v.session.status == wizard::SessionStatus::Done) break;
        while (next < entries.size() && entries[next].speaker != "user") ++next;
        if (next == entries.size()) {
          std::cerr << "transcript ended while the wizard asks: " << v.session.question->prompt << "\n";
          break;
        }
        svc.answer(id, entries[next++].text);
      }
      return finish_run(svc, id);
    }
    // wizard
    std::cout << "run " << id << "\n";
    print_prompt(view.session, shown);
    while (true) {
      auto v = svc.advance_until_input(id);
      print_prompt(v.session, shown);
      if (v.session.status == wizard::SessionStatus::Done) break;
      std::cout << "> " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        std::cout << "\n";
        break;
      }
      v = svc.answer(id, line);
      print_prompt(v.session, shown);
    }
    return finish_run(svc, id);
  } catch (const orchestrator::StageError& e) {
    std::cerr << "stage " << e.stage() << " failed: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitStage;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return in_stage ? kExitStage : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return in_stage ? kExitStage : kExitUsage;
  }
}
