#pragma once

#include "surfkit/geometry/types.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <sys/types.h>
#include <unistd.h>

namespace surfkit::test {

inline std::filesystem::path source_dir() { return SURFKIT_SOURCE_DIR; }
inline std::filesystem::path cli_path() { return SURFKIT_CLI; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "surfkit") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline geom::PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, double extent = 1.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  geom::PointCloud c;
  c.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
  return c;
}

/// Coordinates on a coarse lattice so that distance ties are common.
inline geom::PointCloud lattice_cloud(std::mt19937_64& rng, std::size_t n, int cells = 6) {
  std::uniform_int_distribution<int> u(0, cells);
  geom::PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng));
  return c;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace surfkit::test
