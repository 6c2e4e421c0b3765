#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace kedim {

/// Static k-d tree over the columns of a dense matrix (one point per column).
/// Used for nearest-center queries when verifying covers.
class KdTree {
 public:
  struct Hit {
    Eigen::Index index = -1;
    double squared_distance = 0.0;
  };

  explicit KdTree(Eigen::MatrixXd points, std::size_t leaf_size = 16);

  /// Nearest point to `query`; index -1 when the tree is empty.
  Hit nearest(const Eigen::Ref<const Eigen::VectorXd>& query) const;

  Eigen::Index size() const noexcept { return points_.cols(); }
  Eigen::Index dimension() const noexcept { return points_.rows(); }

 private:
  struct Node {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    int left = -1;
    int right = -1;
  };

  int build(Eigen::Index begin, Eigen::Index end);
  void search(int node, const Eigen::Ref<const Eigen::VectorXd>& query, Hit& best) const;

  Eigen::MatrixXd points_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

}  // namespace kedim
