#include "surfkit/geometry/spatial_index.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>

namespace surfkit::geom {
namespace {

constexpr std::size_t kLeafSize = 12;

inline double sq_dist(const Point3& a, const Point3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

struct Candidate {
  double d2;
  std::size_t id;
  bool operator<(const Candidate& o) const { return d2 < o.d2 || (d2 == o.d2 && id < o.id); }
};

}  // namespace

struct SpatialIndex::Impl {
  struct Node {
    // Leaf when dim < 0: [begin, end) into `order`.
    int dim = -1;
    double split = 0.0;
    std::uint32_t left = 0, right = 0;
    std::uint32_t begin = 0, end = 0;
  };

  std::vector<Point3> pts;
  std::vector<std::size_t> order;
  std::vector<Node> nodes;

  explicit Impl(std::vector<Point3> points) : pts(std::move(points)) {
    order.resize(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    nodes.reserve(2 * pts.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(pts.size()));
  }

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto idx = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    if (end - begin <= kLeafSize) {
      nodes[idx].begin = begin;
      nodes[idx].end = end;
      return idx;
    }
    Point3 lo = pts[order[begin]], hi = lo;
    for (auto i = begin; i < end; ++i) {
      lo = lo.cwiseMin(pts[order[i]]);
      hi = hi.cwiseMax(pts[order[i]]);
    }
    int dim = 0;
    (hi - lo).maxCoeff(&dim);
    if (hi[dim] - lo[dim] <= 0.0) {  // all points coincide
      nodes[idx].begin = begin;
      nodes[idx].end = end;
      return idx;
    }
    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       return pts[a][dim] < pts[b][dim] || (pts[a][dim] == pts[b][dim] && a < b);
                     });
    const double split = pts[order[mid]][dim];
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    nodes[idx].dim = dim;
    nodes[idx].split = split;
    nodes[idx].left = left;
    nodes[idx].right = right;
    return idx;
  }

  void knn(std::uint32_t node, const Point3& q, std::size_t k, std::priority_queue<Candidate>& heap) const {
    const Node& n = nodes[node];
    if (n.dim < 0) {
      for (auto i = n.begin; i < n.end; ++i) {
        const Candidate c{sq_dist(pts[order[i]], q), order[i]};
        if (heap.size() < k) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const double diff = q[n.dim] - n.split;
    const auto near = diff < 0 ? n.left : n.right;
    const auto far = diff < 0 ? n.right : n.left;
    knn(near, q, k, heap);
    // Equal-distance candidates may sit across the split: keep ties.
    if (heap.size() < k || diff * diff <= heap.top().d2) knn(far, q, k, heap);
  }

  void radius(std::uint32_t node, const Point3& q, double r2, std::vector<Candidate>& out) const {
    const Node& n = nodes[node];
    if (n.dim < 0) {
      for (auto i = n.begin; i < n.end; ++i) {
        const double d2 = sq_dist(pts[order[i]], q);
        if (d2 <= r2) out.push_back({d2, order[i]});
      }
      return;
    }
    const double diff = q[n.dim] - n.split;
    const auto near = diff < 0 ? n.left : n.right;
    const auto far = diff < 0 ? n.right : n.left;
    radius(near, q, r2, out);
    if (diff * diff <= r2) radius(far, q, r2, out);
  }
};

SpatialIndex::SpatialIndex(const PointCloud& cloud) : SpatialIndex(cloud.points) {}

SpatialIndex::SpatialIndex(std::vector<Point3> points) {
  if (points.empty()) throw Error(Errc::EmptyCloud, "cannot index an empty cloud");
  impl_ = std::make_shared<const Impl>(std::move(points));
}

std::vector<Neighbor> SpatialIndex::knn(const Point3& query, std::size_t k) const {
  if (k == 0) throw Error(Errc::InvalidParameter, "knn requires k >= 1");
  k = std::min(k, impl_->pts.size());
  std::priority_queue<Candidate> heap;
  impl_->knn(0, query, k, heap);
  std::vector<Neighbor> out(heap.size());
  for (auto i = out.size(); i-- > 0;) {
    out[i] = {heap.top().id, std::sqrt(heap.top().d2)};
    heap.pop();
  }
  return out;
}

std::vector<Neighbor> SpatialIndex::radius(const Point3& query, double r) const {
  if (!(r >= 0.0)) throw Error(Errc::InvalidParameter, "radius must be non-negative");
  std::vector<Candidate> found;
  impl_->radius(0, query, r * r, found);
  std::sort(found.begin(), found.end());
  std::vector<Neighbor> out;
  out.reserve(found.size());
  for (const auto& c : found) out.push_back({c.id, std::sqrt(c.d2)});
  return out;
}

Neighbor SpatialIndex::nearest(const Point3& query) const { return knn(query, 1).front(); }

std::size_t SpatialIndex::size() const { return impl_->pts.size(); }
const Point3& SpatialIndex::point(std::size_t id) const { return impl_->pts.at(id); }
const std::vector<Point3>& SpatialIndex::points() const { return impl_->pts; }

}  // namespace surfkit::geom
