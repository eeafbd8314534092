#include "support.hpp"

#include "surfkit/control/gains.hpp"
#include "surfkit/control/serialization.hpp"
#include "surfkit/control/simulation.hpp"
#include "surfkit/error.hpp"
#include "surfkit/planner/plan.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace surfkit;
using namespace surfkit::control;
using planner::SegmentKind;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

geom::PointCloud grid_plane(double half, double spacing) {
  geom::PointCloud c;
  const int n = static_cast<int>(std::lround(2 * half / spacing));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) c.points.emplace_back(-half + i * spacing, -half + j * spacing, 0.0);
  return c;
}

// Closest point of the box by enumerating which face is active on each axis.
Vec6 box_projection_oracle(const Vec6& w, const WrenchRegion& r) {
  Vec6 best = Vec6::Zero();
  double best_d = std::numeric_limits<double>::infinity();
  for (int code = 0; code < 729; ++code) {
    Vec6 cand;
    int c = code;
    bool feasible = true;
    for (int i = 0; i < 6; ++i, c /= 3) {
      const int state = c % 3;
      if (state == 0) cand(i) = r.lo(i);
      else if (state == 1) cand(i) = r.hi(i);
      else {
        cand(i) = w(i);
        if (w(i) < r.lo(i) || w(i) > r.hi(i)) feasible = false;
      }
    }
    if (!feasible) continue;
    const double d = (cand - w).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = cand;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("control") {

TEST_CASE("region error projects onto the box") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 300; ++trial) {
    Vec6 a, b, w;
    for (int i = 0; i < 6; ++i) {
      a(i) = u(rng);
      b(i) = trial % 5 == 0 ? a(i) : u(rng);
      w(i) = u(rng);
    }
    const auto region = WrenchRegion::make(a.cwiseMin(b), a.cwiseMax(b));
    const Vec6 e = wrench_region_error(w, region);
    CHECK(((w + e) - box_projection_oracle(w, region)).norm() < 1e-12);
    CHECK(region.contains(w) == (e.norm() == 0.0));
  }
  Vec6 lo = Vec6::Zero(), hi = Vec6::Zero();
  lo(0) = 1.0;
  CHECK(code_of([&] { WrenchRegion::make(lo, hi); }) == Errc::InvalidParameter);
  CHECK(WrenchRegion::normal_force(5.0).fz_setpoint() == 5.0);
}

TEST_CASE("PID without filtering equals the discrete sums") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  PidGains gains;
  gains.kp = Vec6::Constant(0.7);
  gains.ki = Vec6::Constant(1.3);
  gains.kd = Vec6::Constant(0.05);
  gains.beta = 0.0;
  gains.integral_clamp = Vec6::Constant(1e9);
  const double dt = 0.01;
  PidState state;
  std::vector<Vec6> errors;
  for (int k = 0; k < 100; ++k) {
    Vec6 e;
    for (int i = 0; i < 6; ++i) e(i) = g(rng);
    errors.push_back(e);
    const Vec6 u = pid_step(state, e, dt, gains);
    Vec6 sum = Vec6::Zero();
    for (const auto& x : errors) sum += x * dt;
    const Vec6 diff = k == 0 ? Vec6::Zero() : Vec6((e - errors[k - 1]) / dt);
    const Vec6 want = 0.7 * e + 1.3 * sum + 0.05 * diff;
    CHECK((u - want).norm() < 1e-9);
  }
  CHECK(code_of([&] { pid_step(state, Vec6::Zero(), 0.0, gains); }) == Errc::InvalidParameter);
}

TEST_CASE("PID integral clamp and derivative low-pass") {
  PidGains gains;
  gains.ki = Vec6::Constant(1.0);
  gains.integral_clamp = Vec6::Constant(0.25);
  PidState state;
  for (int k = 0; k < 100; ++k) pid_step(state, Vec6::Constant(1.0), 0.1, gains);
  CHECK(state.integral(3) == 0.25);

  PidGains d;
  d.kd = Vec6::Constant(1.0);
  d.beta = 0.5;
  PidState s2;
  CHECK(pid_step(s2, Vec6::Zero(), 1.0, d).norm() == 0.0);
  // A unit step in error gives raw derivative 1, filtered 0.5, then 0.25.
  CHECK(pid_step(s2, Vec6::Constant(1.0), 1.0, d)(0) == doctest::Approx(0.5));
  CHECK(pid_step(s2, Vec6::Constant(1.0), 1.0, d)(0) == doctest::Approx(0.25));
  d.beta = 1.0;
  CHECK(code_of([&] { d.validate(); }) == Errc::InvalidParameter);
}

TEST_CASE("spring-damper contact") {
  PlantConfig plant;
  CHECK(contact_wrench(-1e-3, 1.0, plant).norm() == 0.0);
  const Vec6 w = contact_wrench(2e-4, 0.01, plant);
  CHECK(w(2) == doctest::Approx(2e4 * 2e-4 + 50 * 0.01));
  CHECK(contact_wrench(2e-4, -0.01, plant)(2) == doctest::Approx(4.0));
  CHECK(w(0) == 0.0);
}

TEST_CASE("height field of a plane and contact lookup") {
  const auto cloud = grid_plane(0.05, 0.002);
  geom::SurfaceFrame frame;
  frame.extent_u = frame.extent_v = 0.05;
  const HeightField hf(cloud, frame, 0.004);
  for (double u : {-0.03, 0.0, 0.011, 0.047}) CHECK(std::abs(*hf.height(u, 0.01)) < 1e-15);
  CHECK_FALSE(hf.height(0.2, 0.0).has_value());
  PlantConfig plant;
  const auto s = contact_force({0.0, 0.0, -1e-4}, hf, 0.0, plant, 1e-4);
  CHECK(s.penetration == doctest::Approx(1e-4));
  CHECK(s.wrench(2) == doctest::Approx(2.0));
  const auto shifted = contact_force({0.0, 0.0, -1e-4}, hf, 1e-4, plant, 2e-4);
  CHECK(shifted.penetration == doctest::Approx(2e-4));
  CHECK(contact_force({0.3, 0.0, 0.0}, hf, 0.0, plant, 0.0).outside);
  CHECK(code_of([&] { HeightField(cloud, frame, 0.0); }) == Errc::InvalidParameter);
  CHECK(code_of([&] { HeightField(geom::PointCloud{}, frame, 0.01); }) == Errc::EmptyCloud);
}

TEST_CASE("metrics on a hand-built trajectory") {
  Trajectory traj;
  traj.dt = 0.1;
  const std::vector<std::pair<SegmentKind, double>> rows = {
      {SegmentKind::Approach, 0.0}, {SegmentKind::Contact, 1.0}, {SegmentKind::Contact, 4.6},
      {SegmentKind::Contact, 5.4}, {SegmentKind::Connect, 9.0}, {SegmentKind::Contact, 4.8}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    TrajectorySample s;
    s.t = 0.1 * static_cast<double>(i);
    s.kind = rows[i].first;
    s.wrench(2) = rows[i].second;
    traj.samples.push_back(s);
  }
  const auto m = control_metrics(traj, WrenchRegion::normal_force(5.0));
  CHECK(m.contact_samples == 4);
  REQUIRE(m.rise_time.has_value());
  CHECK(*m.rise_time == doctest::Approx(0.1));
  CHECK(m.mae == doctest::Approx((0.4 + 0.4 + 0.2) / 3));
  REQUIRE(m.max_after_rise.has_value());
  CHECK(*m.max_after_rise == doctest::Approx(0.4));
  CHECK(code_of([] { control_metrics(Trajectory{}, WrenchRegion::normal_force(1)); }) == Errc::EmptyTrajectory);
}

TEST_CASE("closed loop on a plane tracks the setpoint") {
  const auto cloud = grid_plane(0.04, 0.002);
  planner::PlannerConfig pc;
  const auto plan = planner::plan_path(cloud, pc);
  PlantConfig plant;
  plant.noise_sigma = 0.0;
  const HeightField hf(cloud, plan.path.frame, 0.004);
  const auto region = WrenchRegion::normal_force(5.0);
  const auto gains = tune_gains_default(plant, region);
  const auto res = simulate_execution(plan.path, region, gains, plant, 1, hf);
  CHECK(res.trajectory.success);
  REQUIRE(res.metrics.rise_time.has_value());
  CHECK(*res.metrics.rise_time < 0.5);
  CHECK(res.metrics.mae < 0.5);
  for (std::size_t i = 1; i < res.trajectory.samples.size(); ++i)
    CHECK(res.trajectory.samples[i].t == doctest::Approx(res.trajectory.samples[i - 1].t + plant.dt));

  plant.noise_sigma = 0.05;
  const auto a = simulate_execution(plan.path, region, gains, plant, 11, hf);
  const auto b = simulate_execution(plan.path, region, gains, plant, 11, hf);
  CHECK(trajectory_csv(a.trajectory) == trajectory_csv(b.trajectory));

  plant.force_limit = 3.0;
  const auto aborted = simulate_execution(plan.path, region, gains, plant, 1, hf);
  CHECK_FALSE(aborted.trajectory.success);
  CHECK(aborted.trajectory.failure_reason == "ForceLimitExceeded");
  CHECK(aborted.metrics.failure_reason == "ForceLimitExceeded");
}

TEST_CASE("trajectory csv layout") {
  Trajectory traj;
  traj.samples.resize(2);
  traj.samples[1].t = 0.002;
  std::istringstream in(trajectory_csv(traj));
  std::string header, row;
  std::getline(in, header);
  CHECK(header.rfind("t,kind,px,py,pz,", 0) == 0);
  const auto columns = std::count(header.begin(), header.end(), ',') + 1;
  int rows = 0;
  while (std::getline(in, row)) {
    CHECK(std::count(row.begin(), row.end(), ',') + 1 == columns);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("plant config json round trip") {
  PlantConfig p;
  p.vibration = {1e-3, 10.0};
  p.force_limit = 42.0;
  const auto back = plant_config_from_json(to_json(p));
  CHECK(back.vibration.amplitude == 1e-3);
  CHECK(back.force_limit == 42.0);
  p.dt = 0;
  CHECK(code_of([&] { p.validate(); }) == Errc::InvalidParameter);
}

}  // TEST_SUITE
