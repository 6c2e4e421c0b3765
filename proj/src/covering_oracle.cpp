#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include <fmt/format.h>

#include "kedim/ellipsoid.hpp"
#include "kedim/errors.hpp"
#include "kedim/kdtree.hpp"

namespace kedim {

namespace {

constexpr double kSlack = 1e-12;
// Work cap (cells x stencil size) per refinement level of the planar oracle.
constexpr double kMaxLevelWork = 1.2e8;
constexpr int kMaxLevels = 4;
constexpr int kBoundaryPoints = 2048;

OracleBracket interval_bracket(double half_length, double eps) {
  OracleBracket out;
  out.d = 1;
  out.eps = eps;
  const double a = half_length;
  const auto n = static_cast<Eigen::Index>(std::max(1.0, std::ceil(a / eps - kSlack)));

  // Cover: abutting intervals from -a, the last one flush with +a.
  Eigen::MatrixXd centers(1, n);
  if (n == 1) {
    centers(0, 0) = 0.0;
  } else {
    for (Eigen::Index k = 0; k + 1 < n; ++k) centers(0, k) = -a + eps * static_cast<double>(2 * k + 1);
    centers(0, n - 1) = a - eps;
  }
  const double tol = eps * kSlack;
  bool valid = centers(0, 0) - eps <= -a + tol && centers(0, n - 1) + eps >= a - tol;
  for (Eigen::Index k = 0; k + 1 < n; ++k) valid = valid && centers(0, k + 1) - centers(0, k) <= 2.0 * eps + tol;
  if (!valid) throw InternalError("covering_oracle: interval cover failed certification");
  out.hi = static_cast<std::size_t>(n);
  out.cover_centers = centers;

  // Packing: m equally spaced points across [-a, a]; take the largest m whose
  // spacing strictly exceeds 2 eps.
  for (Eigen::Index m = n; m >= 1; --m) {
    Eigen::MatrixXd pts(1, m);
    if (m == 1) {
      pts(0, 0) = 0.0;
    } else {
      for (Eigen::Index k = 0; k < m; ++k) pts(0, k) = -a + 2.0 * a * static_cast<double>(k) / static_cast<double>(m - 1);
    }
    if (is_two_eps_separated(pts, eps)) {
      out.lo = static_cast<std::size_t>(m);
      out.packing_points = pts;
      break;
    }
  }
  return out;
}

struct PlanarLevel {
  std::size_t lo = 0;
  std::size_t hi = 0;
  Eigen::MatrixXd cover;
  Eigen::MatrixXd packing;
};

Eigen::MatrixXd greedy_packing(const std::vector<Eigen::Vector2d>& ordered, double eps) {
  const double min_sq = 4.0 * eps * eps * (1.0 + kSlack);
  std::vector<Eigen::Vector2d> chosen;
  for (const auto& p : ordered) {
    bool ok = true;
    for (const auto& q : chosen) {
      if ((p - q).squaredNorm() <= min_sq) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(p);
  }
  Eigen::MatrixXd out(2, static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t i = 0; i < chosen.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = chosen[i];
  return out;
}

PlanarLevel planar_level(double mu1, double mu2, double eps, double h) {
  const double a1 = std::sqrt(mu1);
  const double a2 = std::sqrt(mu2);
  const long nx = static_cast<long>(std::ceil(2.0 * a1 / h));
  const long ny = static_cast<long>(std::ceil(2.0 * a2 / h));
  const double x0 = -0.5 * static_cast<double>(nx) * h;
  const double y0 = -0.5 * static_cast<double>(ny) * h;
  auto centre = [&](long i, long j) {
    return Eigen::Vector2d(x0 + h * (static_cast<double>(i) + 0.5), y0 + h * (static_cast<double>(j) + 0.5));
  };
  auto axis_min_sq = [&](double c) {
    const double lo = c - 0.5 * h;
    const double hi = c + 0.5 * h;
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    const double m = std::min(std::abs(lo), std::abs(hi));
    return m * m;
  };

  // Cells (squares of side h) meeting the ellipse; -1 marks cells outside.
  std::vector<long> cell_id(static_cast<std::size_t>(nx * ny), -1);
  std::vector<std::pair<long, long>> cells;
  for (long i = 0; i < nx; ++i) {
    for (long j = 0; j < ny; ++j) {
      const Eigen::Vector2d c = centre(i, j);
      if (axis_min_sq(c.x()) / mu1 + axis_min_sq(c.y()) / mu2 <= 1.0) {
        cell_id[static_cast<std::size_t>(i * ny + j)] = static_cast<long>(cells.size());
        cells.emplace_back(i, j);
      }
    }
  }

  // Stencil of cell offsets a candidate centred on a cell certifiably covers:
  // |centre - cell centre| + h / sqrt(2) <= eps.
  const double reach = eps * (1.0 - kSlack) - h / std::numbers::sqrt2;
  std::vector<std::pair<long, long>> stencil;
  const long r = static_cast<long>(std::floor(reach / h)) + 1;
  for (long di = -r; di <= r; ++di) {
    for (long dj = -r; dj <= r; ++dj) {
      if (h * std::hypot(static_cast<double>(di), static_cast<double>(dj)) <= reach) stencil.emplace_back(di, dj);
    }
  }

  // Greedy set cover with lazy gain updates; candidates are the cell centres.
  std::vector<char> covered(cells.size(), 0);
  auto gain = [&](std::size_t cand) {
    long g = 0;
    for (auto [di, dj] : stencil) {
      const long i = cells[cand].first + di;
      const long j = cells[cand].second + dj;
      if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
      const long id = cell_id[static_cast<std::size_t>(i * ny + j)];
      if (id >= 0 && !covered[static_cast<std::size_t>(id)]) ++g;
    }
    return g;
  };
  using Entry = std::pair<long, long>;  // (gain, -index): max gain, then lowest index
  std::priority_queue<Entry> queue;
  for (std::size_t c = 0; c < cells.size(); ++c) queue.emplace(gain(c), -static_cast<long>(c));
  std::size_t remaining = cells.size();
  std::vector<std::size_t> chosen;
  while (remaining > 0 && !queue.empty()) {
    auto [g, neg] = queue.top();
    queue.pop();
    const auto cand = static_cast<std::size_t>(-neg);
    const long fresh = gain(cand);
    if (fresh != g) {
      if (fresh > 0) queue.emplace(fresh, neg);
      continue;
    }
    if (fresh == 0) continue;
    chosen.push_back(cand);
    for (auto [di, dj] : stencil) {
      const long i = cells[cand].first + di;
      const long j = cells[cand].second + dj;
      if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
      const long id = cell_id[static_cast<std::size_t>(i * ny + j)];
      if (id >= 0 && !covered[static_cast<std::size_t>(id)]) {
        covered[static_cast<std::size_t>(id)] = 1;
        --remaining;
      }
    }
  }
  if (remaining != 0) throw InternalError("covering_oracle: greedy cover left cells uncovered");

  PlanarLevel out;
  out.hi = chosen.size();
  out.cover.resize(2, static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    out.cover.col(static_cast<Eigen::Index>(k)) = centre(cells[chosen[k]].first, cells[chosen[k]].second);
  }

  // Independent re-certification through nearest-centre queries.
  const KdTree tree(out.cover);
  for (auto [i, j] : cells) {
    const double dist = std::sqrt(tree.nearest(centre(i, j)).squared_distance);
    if (dist + h / std::numbers::sqrt2 > eps) {
      throw InternalError("covering_oracle: planar cover failed certification");
    }
  }

  // Packings: lattice points inside the ellipse plus boundary points, tried
  // boundary-first and in raster order; the larger one is kept.
  std::vector<Eigen::Vector2d> pts;
  for (auto [i, j] : cells) {
    const Eigen::Vector2d c = centre(i, j);
    if (c.x() * c.x() / mu1 + c.y() * c.y() / mu2 <= 1.0) pts.push_back(c);
  }
  for (int k = 0; k < kBoundaryPoints; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kBoundaryPoints;
    Eigen::Vector2d p(a1 * std::cos(t), a2 * std::sin(t));
    const double g = p.x() * p.x() / mu1 + p.y() * p.y() / mu2;
    if (g > 1.0) p /= std::sqrt(g);
    pts.push_back(p);
  }
  std::vector<Eigen::Vector2d> boundary_first(pts);
  std::stable_sort(boundary_first.begin(), boundary_first.end(), [&](const auto& p, const auto& q) {
    return p.x() * p.x() / mu1 + p.y() * p.y() / mu2 > q.x() * q.x() / mu1 + q.y() * q.y() / mu2;
  });
  Eigen::MatrixXd pack_a = greedy_packing(boundary_first, eps);
  Eigen::MatrixXd pack_b = greedy_packing(pts, eps);
  out.packing = pack_a.cols() >= pack_b.cols() ? pack_a : pack_b;
  if (!is_two_eps_separated(out.packing, eps)) throw InternalError("covering_oracle: packing not separated");
  out.lo = static_cast<std::size_t>(out.packing.cols());
  return out;
}

}  // namespace

OracleBracket covering_oracle(const Ellipsoid& e, double eps, std::size_t d) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("covering_oracle: eps must be positive");
  if (d != 1 && d != 2) throw ConfigError("covering_oracle: d must be 1 or 2");
  if (d == 1) return interval_bracket(std::sqrt(e.mu_at(1)), eps);

  const double mu1 = e.mu_at(1);
  const double mu2 = e.mu_at(2);
  OracleBracket out;
  out.d = 2;
  out.eps = eps;
  double h = eps / 8.0;
  bool improved_last = false;
  for (int level = 0; level < kMaxLevels; ++level) {
    const double cells = (2.0 * std::sqrt(mu1) / h + 1.0) * (2.0 * std::sqrt(mu2) / h + 1.0);
    const double stencil = std::numbers::pi * (eps / h) * (eps / h);
    if (level > 0 && cells * stencil > kMaxLevelWork) {
      out.refinement_capped = improved_last;
      break;
    }
    PlanarLevel lvl = planar_level(mu1, mu2, eps, h);
    improved_last = false;
    if (level == 0 || lvl.hi < out.hi) {
      out.hi = lvl.hi;
      out.cover_centers = std::move(lvl.cover);
      improved_last = true;
    }
    if (level == 0 || lvl.lo > out.lo) {
      out.lo = lvl.lo;
      out.packing_points = std::move(lvl.packing);
      improved_last = true;
    }
    out.refinement_levels = level + 1;
    if (out.lo == out.hi) break;
    if (level > 0 && !improved_last) break;
    if (level + 1 == kMaxLevels) out.refinement_capped = improved_last;
    h *= 0.5;
  }
  if (out.lo > out.hi) throw InternalError("covering_oracle: packing exceeds cover, certification inconsistent");
  return out;
}

}  // namespace kedim
