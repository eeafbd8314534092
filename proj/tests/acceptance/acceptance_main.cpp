// Acceptance checks for the primary pipeline. One PASS/FAIL line per
// criterion; the exit status is non-zero when any criterion fails.

#include "support.hpp"

#include "surfkit/control/gains.hpp"
#include "surfkit/control/serialization.hpp"
#include "surfkit/control/simulation.hpp"
#include "surfkit/error.hpp"
#include "surfkit/geometry/cloud_ops.hpp"
#include "surfkit/geometry/registration.hpp"
#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/orchestrator/artifact_store.hpp"
#include "surfkit/orchestrator/http_api.hpp"
#include "surfkit/orchestrator/run_service.hpp"
#include "surfkit/perception/defects.hpp"
#include "surfkit/perception/outliers.hpp"
#include "surfkit/perception/synthetic_scan.hpp"
#include "surfkit/planner/plan.hpp"
#include "surfkit/wizard/grounding.hpp"
#include "surfkit/wizard/kb_parser.hpp"
#include "surfkit/wizard/session.hpp"
#include "surfkit/wizard/transcript.hpp"
#include "surfkit/wizard/workflow.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>
#include <thread>

using namespace surfkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 ------------------------------------------------------------------------

Outcome path_alignment() {
  perception::SyntheticScanSpec spec;
  spec.kind = perception::SurfaceKind::CylinderPatch;
  spec.cylinder_radius = 2.0;
  spec.size_s = 0.5;
  spec.size_y = 0.75;
  spec.spacing = 1e-3;
  spec.noise_sigma = 2e-5;
  spec.seed = 1;
  const auto scan = perception::make_synthetic_scan(spec);
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = planner::plan_path(scan.cloud, planner::PlannerConfig{});
  const double secs = seconds_since(t0);
  const auto& m = res.metrics;
  return {m.rmse <= 0.5e-3 && m.mae <= 0.45e-3 && m.max <= 2.0e-3 && secs <= 10.0,
          fmt("rmse=%.4f mm mae=%.4f mm max=%.4f mm runtime=%.2f s points=%zu", m.rmse * 1e3, m.mae * 1e3,
              m.max * 1e3, secs, scan.cloud.size())};
}

// 2 ------------------------------------------------------------------------

Outcome planner_property() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int surfaces = 0, violations = 0, order_failures = 0;
  std::size_t contacts = 0;
  for (int trial = 0; trial < 60; ++trial) {
    perception::SyntheticScanSpec spec;
    spec.kind = trial % 2 ? perception::SurfaceKind::CylinderPatch : perception::SurfaceKind::Plane;
    spec.cylinder_radius = 0.3 + 2.0 * u(rng);
    spec.size_s = 0.06 + 0.1 * u(rng);
    spec.size_y = 0.06 + 0.1 * u(rng);
    spec.spacing = 0.0015 + 0.0015 * u(rng);
    spec.noise_sigma = 3e-5 * u(rng);
    spec.seed = static_cast<std::uint64_t>(trial);
    if (trial % 3 == 0) spec.defects = {{0.0, 0.0, 0.01 + 0.01 * u(rng), (u(rng) - 0.5) * 3e-3}};
    auto cloud = perception::make_synthetic_scan(spec).cloud;
    const Eigen::Matrix3d r = test::random_rotation(rng);
    const geom::Vec3 t(u(rng), u(rng), u(rng));
    for (auto& p : cloud.points) p = r * p + t;
    cloud.line_index.reset();

    planner::PlannerConfig cfg;
    cfg.stepover = 0.01 + 0.02 * u(rng);
    cfg.angle_of_attack_deg = 10.0 * u(rng);
    const auto res = planner::plan_path(cloud, cfg);
    const geom::SpatialIndex index(cloud);
    const double band = *res.path.config.band_halfwidth;
    for (const auto& w : res.path.waypoints) {
      if (w.kind != planner::SegmentKind::Contact) continue;
      ++contacts;
      if (index.nearest(w.position).distance > band) ++violations;
    }
    const auto& m = res.metrics;
    if (!(m.mae <= m.rmse && m.rmse <= m.max)) ++order_failures;
    ++surfaces;
  }
  return {surfaces >= 50 && violations == 0 && order_failures == 0,
          fmt("surfaces=%d contact waypoints=%zu outside band=%d metric order failures=%d", surfaces, contacts,
              violations, order_failures)};
}

// 3 ------------------------------------------------------------------------

Outcome defect_benchmark() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int seeded = 0, found = 0, wrong_sign = 0, detections = 0, worst_fp = 0;
  for (int cloud_id = 0; cloud_id < 20; ++cloud_id) {
    perception::SyntheticScanSpec spec;
    spec.kind = cloud_id % 2 ? perception::SurfaceKind::CylinderPatch : perception::SurfaceKind::Plane;
    spec.size_s = 0.2;
    spec.size_y = 0.2;
    spec.noise_sigma = 2e-5;
    spec.spurious_points = 10;
    spec.seed = 100 + static_cast<std::uint64_t>(cloud_id);
    for (double cs : {-0.05, 0.05}) {
      for (double cy : {-0.05, 0.05}) {
        const double depth = (0.5e-3 + 1.0e-3 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
        spec.defects.push_back({cs + 0.02 * (u(rng) - 0.5), cy + 0.02 * (u(rng) - 0.5), 0.008 + 0.006 * u(rng), depth});
      }
    }
    const auto scan = perception::make_synthetic_scan(spec);
    const auto report = perception::detect_defects(scan.cloud, perception::PerceptionConfig{});
    std::vector<bool> matched(scan.defects.size(), false);
    int fp = 0;
    for (const auto& r : report.regions) {
      int hit = -1;
      for (std::size_t d = 0; d < scan.defects.size(); ++d) {
        if ((r.centroid - scan.defects[d].center).norm() <= scan.defects[d].seed.radius) hit = static_cast<int>(d);
      }
      if (hit < 0) {
        ++fp;
        continue;
      }
      ++detections;
      matched[static_cast<std::size_t>(hit)] = true;
      const auto want = scan.defects[static_cast<std::size_t>(hit)].seed.depth < 0 ? perception::DefectKind::Dent
                                                                                    : perception::DefectKind::Bump;
      if (r.kind != want) ++wrong_sign;
    }
    seeded += static_cast<int>(scan.defects.size());
    found += static_cast<int>(std::count(matched.begin(), matched.end(), true));
    worst_fp = std::max(worst_fp, fp);
  }
  const double recall = static_cast<double>(found) / seeded;
  return {seeded == 80 && recall >= 0.90 && worst_fp <= 1 && wrong_sign == 0,
          fmt("recall=%d/%d (%.3f) max false positives per cloud=%d wrong kind=%d of %d detections", found, seeded,
              recall, worst_fp, wrong_sign, detections)};
}

// 4 ------------------------------------------------------------------------

std::vector<bool> brute_sor(const geom::PointCloud& c, std::size_t k, double mult) {
  const std::size_t n = c.size();
  std::vector<double> d(n);
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i) {
    all.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) all.emplace_back((c.points[i] - c.points[j]).norm(), j);
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += all[j].first;
    d[i] = s / static_cast<double>(k);
  }
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double limit = mean + mult * std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = d[i] > limit;
  return out;
}

Outcome sor_oracle() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> size(50, 5000);
  std::uniform_int_distribution<std::size_t> kdist(2, 30);
  std::uniform_real_distribution<double> mult(0.5, 3.0);
  std::normal_distribution<double> g(0.0, 1.0);
  int mismatched = 0;
  std::size_t total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    geom::PointCloud c;
    switch (trial % 3) {
      case 0: c = test::random_cloud(rng, n, 0.1); break;
      case 1:
        for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(0.05 * g(rng), 0.05 * g(rng), 0.001 * g(rng));
        break;
      default: c = test::lattice_cloud(rng, n, 8); break;
    }
    for (std::size_t i = 0; i < n / 100; ++i) c.points.emplace_back(0.3 * g(rng), 0.3 * g(rng), 0.3 * g(rng));
    const std::size_t k = std::min(kdist(rng), c.size() - 1);
    const double m = mult(rng);
    const auto got = perception::statistical_outlier_removal(c, k, m);
    std::vector<bool> mask(c.size(), false);
    for (auto id : got.outliers) mask[id] = true;
    if (mask != brute_sor(c, k, m)) ++mismatched;
    total += c.size();
  }
  return {mismatched == 0, fmt("clouds=100 points=%zu mismatched clouds=%d", total, mismatched)};
}

// 5 ------------------------------------------------------------------------

Outcome pid_oracle() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double worst = 0.0;
  for (int seq = 0; seq < 20; ++seq) {
    control::PidGains gains;
    for (int i = 0; i < 6; ++i) {
      gains.kp(i) = u(rng);
      gains.ki(i) = u(rng);
      gains.kd(i) = 0.1 * u(rng);
    }
    gains.beta = 0.0;
    gains.integral_clamp = control::Vec6::Constant(1e12);
    const double dt = 0.001 + 0.01 * u(rng);
    control::PidState state;
    control::Vec6 sum = control::Vec6::Zero(), prev = control::Vec6::Zero();
    for (int k = 0; k < 1000; ++k) {
      control::Vec6 e;
      for (int i = 0; i < 6; ++i) e(i) = g(rng);
      const control::Vec6 out = control::pid_step(state, e, dt, gains);
      for (int i = 0; i < 6; ++i) {
        sum(i) += e(i) * dt;
        const double deriv = k == 0 ? 0.0 : (e(i) - prev(i)) / dt;
        const double want = gains.kp(i) * e(i) + gains.ki(i) * sum(i) + gains.kd(i) * deriv;
        worst = std::max(worst, std::abs(out(i) - want) / std::max(1.0, std::abs(want)));
      }
      prev = e;
    }
  }
  return {worst <= 1e-9, fmt("sequences=20 steps=1000 max relative deviation=%.3e", worst)};
}

// 6 ------------------------------------------------------------------------

Outcome wrench_projection() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    control::Vec6 a, b, w;
    for (int i = 0; i < 6; ++i) {
      a(i) = u(rng);
      b(i) = trial % 10 == 0 ? a(i) : u(rng);
      w(i) = u(rng);
    }
    const auto region = control::WrenchRegion::make(a.cwiseMin(b), a.cwiseMax(b));
    const control::Vec6 proj = w + control::wrench_region_error(w, region);
    // Enumerate lower face, upper face or interior on every axis.
    double best = std::numeric_limits<double>::infinity();
    control::Vec6 best_p = control::Vec6::Zero();
    for (int code = 0; code < 729; ++code) {
      control::Vec6 p;
      bool feasible = true;
      int c = code;
      for (int i = 0; i < 6; ++i, c /= 3) {
        const int s = c % 3;
        p(i) = s == 0 ? region.lo(i) : s == 1 ? region.hi(i) : w(i);
        if (s == 2 && (w(i) < region.lo(i) || w(i) > region.hi(i))) feasible = false;
      }
      if (feasible && (p - w).squaredNorm() < best) {
        best = (p - w).squaredNorm();
        best_p = p;
      }
    }
    worst = std::max(worst, (proj - best_p).norm());
  }
  return {worst <= 1e-9, fmt("pairs=10000 max deviation=%.3e", worst)};
}

// 7, 8 ---------------------------------------------------------------------

struct ControlFixture {
  planner::PlanResult plan;
  control::HeightField surface;
  control::WrenchRegion region = control::WrenchRegion::normal_force(5.0);
};

const ControlFixture& control_fixture() {
  static const ControlFixture f = [] {
    perception::SyntheticScanSpec spec;
    spec.noise_sigma = 2e-5;
    spec.seed = 3;
    const auto scan = perception::make_synthetic_scan(spec);
    ControlFixture out;
    out.plan = planner::plan_path(scan.cloud, planner::PlannerConfig{});
    out.surface = control::HeightField(scan.cloud, out.plan.path.frame, 2.0 * geom::median_spacing(scan.cloud));
    return out;
  }();
  return f;
}

control::SimulationResult run_plant(const control::PlantConfig& plant, std::uint64_t seed) {
  const auto& f = control_fixture();
  const auto gains = control::tune_gains_default(plant, f.region);
  return control::simulate_execution(f.plan.path, f.region, gains, plant, seed, f.surface);
}

Outcome force_control() {
  control::PlantConfig quiet;
  quiet.noise_sigma = 0.0;
  const auto a = run_plant(quiet, 1);
  control::PlantConfig disturbed;
  disturbed.vibration = {1e-3, 10.0};
  const auto b = run_plant(disturbed, 1);
  const std::string reference = control::trajectory_csv(b.trajectory);
  int identical = 0;
  for (int r = 0; r < 5; ++r) identical += control::trajectory_csv(run_plant(disturbed, 1).trajectory) == reference;
  const bool ok = a.metrics.success && b.metrics.success && a.metrics.rise_time && b.metrics.rise_time &&
                  *a.metrics.rise_time <= 1.0 && *b.metrics.rise_time <= 1.0 && a.metrics.mae <= 0.2 &&
                  b.metrics.mae <= 1.5 && identical == 5;
  return {ok, fmt("rise=%.3f s mae quiet=%.3f N mae 1 mm/10 Hz+noise=%.3f N repeats identical=%d/5",
                  a.metrics.rise_time.value_or(-1.0), a.metrics.mae, b.metrics.mae, identical)};
}

Outcome abort_behavior() {
  auto aborts = [](double amplitude, std::string* reason) {
    control::PlantConfig plant;
    plant.vibration = {amplitude, 15.0};
    const auto r = run_plant(plant, 8);
    if (reason) *reason = r.metrics.failure_reason;
    return !r.metrics.success;
  };
  std::vector<double> amps;
  for (int i = 0; i <= 20; ++i) amps.push_back(0.5e-3 * i);
  std::vector<bool> flags;
  bool reasons_ok = true;
  for (double a : amps) {
    std::string reason;
    flags.push_back(aborts(a, &reason));
    if (flags.back() && reason != "ForceLimitExceeded") reasons_ok = false;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < flags.size(); ++i)
    if (flags[i - 1] && !flags[i]) monotone = false;
  const auto first = std::find(flags.begin(), flags.end(), true);
  double threshold = -1.0;
  if (first != flags.end() && first != flags.begin()) {
    double lo = amps[static_cast<std::size_t>(first - flags.begin()) - 1];
    double hi = amps[static_cast<std::size_t>(first - flags.begin())];
    for (int it = 0; it < 12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (aborts(mid, nullptr) ? hi : lo) = mid;
    }
    threshold = hi;
  }
  const bool ok = !flags.front() && first != flags.end() && monotone && reasons_ok;
  return {ok, fmt("15 Hz sweep 0..10 mm: aborts=%zu/%zu monotone=%s abort threshold=%.3f mm reason ok=%s",
                  static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true)), flags.size(),
                  monotone ? "yes" : "no", threshold * 1e3, reasons_ok ? "yes" : "no")};
}

// 9 ------------------------------------------------------------------------

Outcome registration() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::normal_distribution<double> noise(0.0, 1e-4);
  double worst_exact = 0.0;
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Matrix3d r = test::random_rotation(rng);
    const geom::Vec3 t(u(rng), u(rng), u(rng));
    std::vector<geom::Point3> src, dst, noisy;
    for (int i = 0; i < 100; ++i) {
      src.emplace_back(u(rng), u(rng), u(rng));
      dst.push_back(r * src.back() + t);
      noisy.push_back(dst.back() + geom::Vec3(noise(rng), noise(rng), noise(rng)));
    }
    const auto est = geom::estimate_rigid_transform(src, dst);
    worst_exact = std::max({worst_exact, (est.rotation - r).cwiseAbs().maxCoeff(),
                            (est.translation - t).cwiseAbs().maxCoeff()});
    const auto fit = geom::estimate_rigid_transform(src, noisy);
    const double cosang = std::clamp(((fit.rotation * r.transpose()).trace() - 1.0) / 2.0, -1.0, 1.0);
    if (std::acos(cosang) * 180.0 / std::numbers::pi < 0.1) ++good;
  }
  return {worst_exact <= 1e-9 && good >= 95,
          fmt("noiseless max deviation=%.3e noisy trials under 0.1 deg=%d/100", worst_exact, good)};
}

// 10 -----------------------------------------------------------------------

Outcome wizard_golden() {
  const std::string text = orchestrator::read_file(test::source_dir() / "data" / "golden_transcript.txt");
  const wizard::Wizard w(wizard::default_kb());
  const auto replay = wizard::replay_transcript(w, wizard::parse_transcript(text));
  const std::vector<std::string> expected = {"scan", "detect_defects", "plan_path", "simulate", "execute"};
  const bool replay_ok = replay.session.status == wizard::SessionStatus::Done && replay.actions == expected &&
                         wizard::format_transcript(replay.session.transcript) == text;

  auto s = w.create_session("g");
  w.answer(s, "sanding");
  const std::string material_prompt = s.question->prompt;
  w.answer(s, "banana");
  const bool reprompt = s.question->key == "material" && s.transcript.back().text == material_prompt;
  w.answer(s, "fibre glass");
  const bool fuzzy = s.belief.count("material") && s.belief.at("material").text() == "Fiberglass" &&
                     s.last_grounding && s.last_grounding->stage == wizard::MatchStage::Fuzzy;

  const auto issues = wizard::model_check(wizard::default_kb(), "SurfaceTreatment");
  return {replay_ok && reprompt && fuzzy && issues.empty(),
          fmt("replay=%s actions=%zu fibre glass->Fiberglass=%s banana re-prompt=%s model-check issues=%zu",
              replay_ok ? "identical" : "differs", replay.actions.size(), fuzzy ? "yes" : "no",
              reprompt ? "yes" : "no", issues.size())};
}

// 11 -----------------------------------------------------------------------

json small_run() {
  return json::parse(R"({
    "inputs": {"synthetic": {"kind": "cylinder", "size_s": 0.08, "size_y": 0.06, "spacing": 0.002,
                             "noise_sigma": 2e-05, "spurious_points": 5, "seed": 2,
                             "defects": [{"center_s": 0.01, "center_y": 0.0, "radius": 0.01, "depth": -0.001}]}},
    "seed": 5
  })");
}

orchestrator::RunConfig config_of(json cfg) {
  cfg.erase("inputs");
  return orchestrator::run_config_from_json(cfg);
}

std::string reply_for(const std::string& key) {
  if (key == "task") return "sanding please";
  if (key == "material") return "fibre glass";
  if (key == "removal_amount") return "about 0.5 mm";
  if (key == "simulation_approved") return "yes";
  if (key == "qc_approved") return "approved";
  return "5 N";
}

void drive(orchestrator::RunService& svc, const std::string& id) {
  for (int guard = 0; guard < 100; ++guard) {
    const auto v = svc.get(id);
    if (v.session.status == wizard::SessionStatus::Done) return;
    if (v.session.status == wizard::SessionStatus::AwaitingAction) svc.advance(id);
    else svc.answer(id, reply_for(v.session.question->key));
  }
  throw Error(Errc::ProtocolError, "run did not finish");
}

const std::vector<std::string> kKinds = {"cloud", "defects", "path", "trajectory_sim", "trajectory", "metrics",
                                         "transcript"};

std::map<std::string, std::string> artifacts(const orchestrator::RunService& svc, const std::string& id) {
  std::map<std::string, std::string> out;
  for (const auto& k : kKinds) out[k] = svc.artifact(id, k);
  return out;
}

// Attempt counters of the stages that are ok right now.
std::map<std::string, std::size_t> ok_attempts(const orchestrator::RunService& svc, const std::string& id) {
  std::map<std::string, std::size_t> out;
  for (const auto& st : svc.get(id).manifest.stages)
    if (st.status == orchestrator::StageStatus::Ok) out[st.name] = st.attempts;
  return out;
}

Outcome crash_resume() {
  const json cfg = small_run();
  const auto inputs = orchestrator::run_inputs_from_json(cfg["inputs"]);
  test::TempDir ref_dir("surfkit-accept");
  std::vector<std::string> points;
  orchestrator::RunService ref({ref_dir.path(), {}, [&](std::string_view p) { points.emplace_back(p); }});
  const std::string ref_id = ref.create(inputs, config_of(cfg)).manifest.id;
  points.clear();
  drive(ref, ref_id);
  const auto ref_artifacts = artifacts(ref, ref_id);

  int kills = 0, resumed = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].rfind("stage-done:", 0) != 0 && points[k] != "prepared" && points[k] != "committed") continue;
    test::TempDir dir("surfkit-accept");
    std::string id;
    {
      orchestrator::RunService setup({dir.path(), {}, {}});
      id = setup.create(inputs, config_of(cfg)).manifest.id;
    }
    std::fflush(nullptr);
    const pid_t child = ::fork();
    if (child == 0) {
      std::size_t seen = 0;
      orchestrator::RunService svc({dir.path(), {}, [&](std::string_view) {
                                      if (seen++ == k) ::_exit(0);
                                    }});
      try {
        drive(svc, id);
      } catch (...) {
      }
      ::_exit(4);
    }
    int status = 0;
    ::waitpid(child, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) continue;
    ++kills;
    orchestrator::RunService svc({dir.path(), {}, {}});
    svc.recover();
    const auto before = ok_attempts(svc, id);
    drive(svc, id);
    const auto after = ok_attempts(svc, id);
    bool repeated = false;
    for (const auto& [stage, n] : before) repeated |= after.count(stage) == 0 || after.at(stage) != n;
    if (artifacts(svc, id) == ref_artifacts && !repeated) ++resumed;
  }

  // CLI and HTTP API on the same inputs.
  test::TempDir dir("surfkit-accept");
  std::ofstream(dir / "cfg.json") << cfg.dump();
  const std::string golden = (test::source_dir() / "data" / "golden_transcript.txt").string();
  const std::string cmd = test::cli_path().string() + " run --config " + (dir / "cfg.json").string() +
                          " --transcript " + golden + " --out " + (dir / "cli").string() + " > /dev/null 2>&1";
  bool same = std::system(cmd.c_str()) == 0;
  if (same) {
    orchestrator::RunService cli_svc({dir / "cli", {}, {}});
    const auto cli_arts = artifacts(cli_svc, cli_svc.list().front());
    orchestrator::RunService api_svc({dir / "api", {}, {}});
    orchestrator::ApiServer server(api_svc);
    const int port = server.bind("127.0.0.1", 0);
    std::thread th([&] { server.listen(); });
    httplib::Client http("127.0.0.1", port);
    http.set_read_timeout(120, 0);
    const json body = {{"inputs", cfg["inputs"]}, {"config", {{"seed", cfg["seed"]}}}};
    const std::string id = json::parse(http.Post("/v1/runs", body.dump(), "application/json")->body).at("id");
    for (const auto& e : wizard::parse_transcript(orchestrator::read_file(golden))) {
      if (e.speaker != "user") continue;
      http.Post("/v1/runs/" + id + "/advance", R"({"until":"input"})", "application/json");
      http.Post("/v1/runs/" + id + "/wizard", json{{"text", e.text}}.dump(), "application/json");
    }
    http.Post("/v1/runs/" + id + "/advance", R"({"until":"input"})", "application/json");
    for (const auto& k : kKinds) {
      auto r = http.Get("/v1/runs/" + id + "/artifacts/" + k);
      if (!r || r->status != 200 || r->body != cli_arts.at(k)) same = false;
    }
    server.stop();
    th.join();
  }
  return {kills > 0 && resumed == kills && same,
          fmt("kill points=%d resumed identically without repeating a stage=%d CLI/API artifacts identical=%s",
              kills, resumed, same ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, path_alignment},  {2, planner_property}, {3, defect_benchmark}, {4, sor_oracle},
      {5, pid_oracle},      {6, wrench_projection}, {7, force_control},   {8, abort_behavior},
      {9, registration},    {10, wizard_golden},    {11, crash_resume}};
  int failed = 0;
  for (const auto& [n, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << fmt("  [%.1f s]", seconds_since(t0)) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
