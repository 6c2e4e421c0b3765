#include "kedim/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace kedim {

KdTree::KdTree(Eigen::MatrixXd points, std::size_t leaf_size)
    : points_(std::move(points)), order_(static_cast<std::size_t>(points_.cols())),
      leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  std::iota(order_.begin(), order_.end(), Eigen::Index{0});
  if (points_.cols() > 0) {
    nodes_.reserve(static_cast<std::size_t>(2 * points_.cols() / static_cast<Eigen::Index>(leaf_size_) + 2));
    build(0, points_.cols());
  }
}

int KdTree::build(Eigen::Index begin, Eigen::Index end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= static_cast<Eigen::Index>(leaf_size_) || points_.rows() == 0) return id;

  // Split on the axis of largest spread at the median.
  int axis = 0;
  double best_spread = -1.0;
  for (Eigen::Index r = 0; r < points_.rows(); ++r) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = begin; i < end; ++i) {
      const double v = points_(r, order_[static_cast<std::size_t>(i)]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = static_cast<int>(r);
    }
  }
  if (best_spread <= 0.0) return id;  // all points coincide

  const Eigen::Index mid = begin + (end - begin) / 2;
  auto first = order_.begin() + begin;
  std::nth_element(first, order_.begin() + mid, order_.begin() + end,
                   [&](Eigen::Index a, Eigen::Index b) { return points_(axis, a) < points_(axis, b); });
  const double split = points_(axis, order_[static_cast<std::size_t>(mid)]);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].axis = axis;
  nodes_[static_cast<std::size_t>(id)].split = split;
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

KdTree::Hit KdTree::nearest(const Eigen::Ref<const Eigen::VectorXd>& query) const {
  Hit best{-1, std::numeric_limits<double>::infinity()};
  if (nodes_.empty()) return best;
  search(0, query, best);
  return best;
}

void KdTree::search(int node_id, const Eigen::Ref<const Eigen::VectorXd>& query, Hit& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.axis < 0) {
    for (Eigen::Index i = node.begin; i < node.end; ++i) {
      const Eigen::Index idx = order_[static_cast<std::size_t>(i)];
      const double d2 = (points_.col(idx) - query).squaredNorm();
      if (d2 < best.squared_distance || (d2 == best.squared_distance && idx < best.index)) {
        best = Hit{idx, d2};
      }
    }
    return;
  }
  const double diff = query[node.axis] - node.split;
  const int near = diff < 0.0 ? node.left : node.right;
  const int far = diff < 0.0 ? node.right : node.left;
  search(near, query, best);
  if (diff * diff <= best.squared_distance) search(far, query, best);
}

}  // namespace kedim
