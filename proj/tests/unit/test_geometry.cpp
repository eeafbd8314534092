#include "support.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/cloud_io.hpp"
#include "surfkit/geometry/cloud_ops.hpp"
#include "surfkit/geometry/normals.hpp"
#include "surfkit/geometry/registration.hpp"
#include "surfkit/geometry/spatial_index.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

using namespace surfkit;
using namespace surfkit::geom;

namespace {

std::vector<Neighbor> brute_knn(const std::vector<Point3>& pts, const Point3& q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < pts.size(); ++i) all.emplace_back((pts[i] - q).squaredNorm(), i);
  std::sort(all.begin(), all.end());
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back({all[i].second, std::sqrt(all[i].first)});
  return out;
}

PointCloud grid_plane(int nx, int ny, double spacing) {
  PointCloud c;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) c.points.emplace_back(i * spacing, j * spacing, 0.0);
  return c;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("knn equals exhaustive search including ties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud c = trial % 2 ? test::lattice_cloud(rng, 300) : test::random_cloud(rng, 400);
    const SpatialIndex index(c);
    for (int q = 0; q < 30; ++q) {
      const Point3 query = test::random_cloud(rng, 1, 0.8).points[0];
      for (std::size_t k : {1u, 5u, 17u}) {
        const auto got = index.knn(query, k);
        const auto want = brute_knn(c.points, query, k);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].id == want[i].id);
          CHECK(got[i].distance == doctest::Approx(want[i].distance).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("radius search equals exhaustive filter") {
  std::mt19937_64 rng(12);
  const PointCloud c = test::random_cloud(rng, 500);
  const SpatialIndex index(c);
  for (int q = 0; q < 40; ++q) {
    const Point3 query = test::random_cloud(rng, 1).points[0];
    const double r = 0.05 + 0.01 * q;
    std::vector<std::size_t> want;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if ((c.points[i] - query).norm() <= r) want.push_back(i);
    }
    auto got = index.radius(query, r);
    std::vector<std::size_t> ids;
    for (const auto& n : got) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());
    CHECK(ids == want);
  }
}

TEST_CASE("spatial index rejects bad input") {
  CHECK_THROWS_AS(SpatialIndex(PointCloud{}), Error);
  PointCloud c;
  c.points = {Point3::Zero(), Point3::UnitX()};
  const SpatialIndex index(c);
  CHECK(index.knn(Point3::Zero(), 10).size() == 2);
  try {
    index.knn(Point3::Zero(), 0);
    FAIL("expected InvalidParameter");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidParameter);
  }
}

TEST_CASE("voxel downsample matches a brute-force grid") {
  std::mt19937_64 rng(13);
  const PointCloud c = test::random_cloud(rng, 2000);
  const double leaf = 0.3;
  Point3 mn = c.points[0];
  for (const auto& p : c.points) mn = mn.cwiseMin(p);
  std::map<std::tuple<long, long, long>, std::pair<Point3, int>> cells;
  for (const auto& p : c.points) {
    const auto key = std::make_tuple(static_cast<long>(std::floor((p.x() - mn.x()) / leaf)),
                                     static_cast<long>(std::floor((p.y() - mn.y()) / leaf)),
                                     static_cast<long>(std::floor((p.z() - mn.z()) / leaf)));
    auto& cell = cells[key];
    if (cell.second == 0) cell.first = Point3::Zero();
    cell.first += p;
    ++cell.second;
  }
  const PointCloud d = voxel_downsample(c, leaf);
  REQUIRE(d.size() == cells.size());
  std::size_t i = 0;
  for (const auto& [key, cell] : cells) {
    CHECK((d.points[i] - cell.first / cell.second).norm() < 1e-12);
    ++i;
  }
}

TEST_CASE("crop box keeps exactly the points inside in order") {
  std::mt19937_64 rng(14);
  PointCloud c = test::random_cloud(rng, 1000);
  c.line_index = std::vector<int>(c.size(), 0);
  const Aabb box = Aabb::make(Point3(-0.2, -0.5, -1), Point3(0.4, 0.5, 0.3));
  const PointCloud out = crop_box(c, box);
  std::vector<Point3> want;
  for (const auto& p : c.points) {
    if ((p.array() >= box.min.array()).all() && (p.array() <= box.max.array()).all()) want.push_back(p);
  }
  REQUIRE(out.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(out.points[i] == want[i]);
  CHECK(out.line_index->size() == out.size());
}

TEST_CASE("rigid transform is recovered from noiseless correspondences") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const PointCloud src = test::random_cloud(rng, 40);
    const RigidTransform truth = RigidTransform::make(test::random_rotation(rng), Vec3(0.3, -1.2, 2.0) * (trial % 5));
    std::vector<Point3> dst;
    for (const auto& p : src.points) dst.push_back(truth.apply(p));
    const RigidTransform est = estimate_rigid_transform(src.points, dst);
    CHECK((est.rotation - truth.rotation).norm() < 1e-9);
    CHECK((est.translation - truth.translation).norm() < 1e-9);
    CHECK(est.rotation.determinant() == doctest::Approx(1.0));
    CHECK(registration_rms(src.points, dst, est) < 1e-9);
  }
}

TEST_CASE("registration never returns a reflection") {
  // Planar source: a reflection through the plane fits equally well.
  std::vector<Point3> src = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.2, 0}};
  Eigen::Matrix3d rz = Eigen::AngleAxisd(0.7, Vec3::UnitZ()).toRotationMatrix();
  std::vector<Point3> dst;
  for (const auto& p : src) dst.push_back(rz * p + Vec3(1, 2, 3));
  const auto t = estimate_rigid_transform(src, dst);
  CHECK(t.rotation.determinant() == doctest::Approx(1.0));
  CHECK((t.rotation - rz).norm() < 1e-9);
}

TEST_CASE("registration rejects degenerate input") {
  std::vector<Point3> line = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  CHECK(code([&] { estimate_rigid_transform(line, line); }) == Errc::DegenerateInput);
  std::vector<Point3> two = {{0, 0, 0}, {1, 0, 0}};
  CHECK(code([&] { estimate_rigid_transform(two, two); }) == Errc::DegenerateInput);
  std::vector<Point3> three = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK(code([&] { estimate_rigid_transform(three, two); }) == Errc::DegenerateInput);
}

TEST_CASE("normals on a cylinder match the analytic normal") {
  const double radius = 0.5;
  PointCloud c;
  for (int i = -30; i <= 30; ++i) {
    const double th = i * 0.01;
    for (int j = 0; j < 40; ++j) c.points.emplace_back(radius * std::sin(th), 0.005 * j, radius * (1 - std::cos(th)));
  }
  const PointCloud withn = estimate_normals(c, 12);
  REQUIRE(withn.normals.has_value());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point3& p = c.points[i];
    const Vec3 analytic = Vec3(-p.x(), 0.0, radius - p.z()).normalized();
    CHECK((*withn.normals)[i].dot(analytic) > std::cos(1.0 * std::numbers::pi / 180.0));
  }
  const SpatialIndex index(c);
  CHECK(((*withn.normals)[100] - estimate_normal_at(index, c, 100, 12)).norm() < 1e-12);
}

TEST_CASE("normal estimation errors") {
  PointCloud c = grid_plane(3, 3, 0.1);
  auto code = [&](std::size_t k) {
    try {
      estimate_normals(c, k);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  CHECK(code(2) == Errc::InvalidParameter);
  CHECK(code(9) == Errc::InsufficientPoints);
}

TEST_CASE("pca frame of a plane") {
  PointCloud c = grid_plane(30, 10, 0.01);
  const SurfaceFrame f = pca_frame(c);
  CHECK(std::abs(f.n.z()) == doctest::Approx(1.0));
  CHECK(f.n.z() > 0);
  CHECK(std::abs(f.u.x()) == doctest::Approx(1.0));
  CHECK(f.u.cross(f.v).dot(f.n) == doctest::Approx(1.0));
  CHECK(f.origin.x() == doctest::Approx(0.145));
  // Square grid: the in-plane variances tie and u falls back to x.
  const SurfaceFrame sq = pca_frame(grid_plane(10, 10, 0.01));
  CHECK(sq.u.x() == doctest::Approx(1.0));
  const Point3 p(0.05, 0.02, 0.0);
  CHECK((sq.to_world(sq.to_local(p)) - p).norm() < 1e-12);
}

TEST_CASE("median spacing of a grid is the pitch") {
  CHECK(median_spacing(grid_plane(20, 20, 0.002)) == doctest::Approx(0.002));
}

TEST_CASE("transform rotates normals but does not translate them") {
  PointCloud c = grid_plane(3, 3, 1.0);
  c.normals = std::vector<Vec3>(c.size(), Vec3::UnitZ());
  const Eigen::Matrix3d r = Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitX()).toRotationMatrix();
  const PointCloud out = apply_transform(c, RigidTransform::make(r, Vec3(5, 0, 0)));
  CHECK(((*out.normals)[0] - r * Vec3::UnitZ()).norm() < 1e-12);
  CHECK((out.points[1] - (r * c.points[1] + Vec3(5, 0, 0))).norm() < 1e-12);
}

TEST_CASE("binary ply round trip is exact and keeps attributes") {
  test::TempDir dir;
  std::mt19937_64 rng(16);
  PointCloud c = test::random_cloud(rng, 100);
  c.line_index = std::vector<int>(100);
  for (int i = 0; i < 100; ++i) (*c.line_index)[i] = i / 10;
  c.normals = std::vector<Vec3>(100, Vec3(0, 0.6, 0.8));
  save_cloud(c, dir / "a.ply", CloudFormat::Ply);
  const PointCloud back = load_cloud(dir / "a.ply", CloudFormat::Ply);
  REQUIRE(back.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(back.points[i] == c.points[i]);
  CHECK(*back.line_index == *c.line_index);
  CHECK((*back.normals)[7] == (*c.normals)[7]);
}

TEST_CASE("xyz files default to millimeters") {
  test::TempDir dir;
  {
    std::ofstream out(dir / "a.xyz");
    out << "1 2 3 0\n4 5 6 0\n7 8 9 1\n";
  }
  const PointCloud c = load_cloud(dir / "a.xyz", CloudFormat::XyzAscii);
  REQUIRE(c.size() == 3);
  CHECK(c.points[1].y() == doctest::Approx(0.005));
  CHECK((*c.line_index)[2] == 1);
  const PointCloud m = load_cloud(dir / "a.xyz", CloudFormat::XyzAscii, LengthUnit::Meter);
  CHECK(m.points[1].y() == doctest::Approx(5.0));
}

TEST_CASE("malformed cloud files raise ParseError") {
  test::TempDir dir;
  {
    std::ofstream out(dir / "bad.xyz");
    out << "1 2\n";
  }
  try {
    load_cloud(dir / "bad.xyz", CloudFormat::XyzAscii);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
  }
}

}  // TEST_SUITE
