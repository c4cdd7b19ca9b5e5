#include "pcc/metrics/emd.hpp"

#include "pcc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace pcc {
namespace {

void check_sizes(const PointCloud& a, const PointCloud& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("EMD needs equal-size clouds, got " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  }
}

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

}  // namespace

double matching_cost(const PointCloud& a, const PointCloud& b,
                     const std::vector<std::size_t>& assignment) {
  check_sizes(a, b);
  if (a.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[assignment[i]]).norm();
  return sum / static_cast<double>(a.size());
}

bool is_permutation(const std::vector<std::size_t>& assignment, std::size_t n) {
  if (assignment.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (auto j : assignment) {
    if (j >= n || seen[j]) return false;
    seen[j] = 1;
  }
  return true;
}

Matching emd_exact(const PointCloud& a, const PointCloud& b) {
  check_sizes(a, b);
  const std::size_t n = a.size();
  if (n > kMaxExactEmdPoints) {
    throw InvalidArgument("emd_exact is limited to " + std::to_string(kMaxExactEmdPoints) +
                          " points");
  }
  Matching m;
  if (n == 0) return m;

  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = (a[i] - b[j]).norm();
  }

  // Shortest augmenting path Hungarian algorithm with row/column potentials (1-based).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  m.assignment.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) m.assignment[row_of_col[j] - 1] = j - 1;
  m.cost = matching_cost(a, b, m.assignment);
  return m;
}

Matching emd_approx(const PointCloud& a, const PointCloud& b, const AuctionOptions& options) {
  check_sizes(a, b);
  if (!(options.eps_initial > 0.0) || !(options.eps_factor > 0.0 && options.eps_factor < 1.0)) {
    throw InvalidArgument("auction needs eps_initial > 0 and eps_factor in (0, 1)");
  }
  const std::size_t n = a.size();
  Matching m;
  if (n == 0) return m;

  const double eps_final =
      options.eps_final > 0.0 ? options.eps_final : 1e-4 / static_cast<double>(n);
  const std::size_t bid_cap = options.max_bids_per_phase > 0 ? options.max_bids_per_phase : 50 * n;

  // Distances in the scan use single precision; the reported cost is recomputed in double.
  std::vector<float> bx(n), by(n), bz(n);
  for (std::size_t j = 0; j < n; ++j) {
    bx[j] = static_cast<float>(b[j].x());
    by[j] = static_cast<float>(b[j].y());
    bz[j] = static_cast<float>(b[j].z());
  }
  std::vector<double> price(n, 0.0);
  std::vector<std::size_t> owner(n), object_of(n), queue;
  queue.reserve(n);
  std::vector<std::size_t> best_complete;

  double eps = std::max(options.eps_initial, eps_final);
  bool converged = true;
  while (true) {
    std::fill(owner.begin(), owner.end(), kUnassigned);
    std::fill(object_of.begin(), object_of.end(), kUnassigned);
    queue.clear();
    for (std::size_t i = n; i-- > 0;) queue.push_back(i);

    std::size_t bids = 0;
    while (!queue.empty() && bids < bid_cap) {
      const std::size_t i = queue.back();
      queue.pop_back();
      const float ax = static_cast<float>(a[i].x());
      const float ay = static_cast<float>(a[i].y());
      const float az = static_cast<float>(a[i].z());
      auto target_value = [&](std::size_t j) {
        const float dx = ax - bx[j], dy = ay - by[j], dz = az - bz[j];
        return -static_cast<double>(std::sqrt(dx * dx + dy * dy + dz * dz)) - price[j];
      };
      constexpr std::size_t kLanes = 8;
      double top1[kLanes], top2[kLanes];
      std::int64_t arg1[kLanes];
      std::fill(top1, top1 + kLanes, -std::numeric_limits<double>::infinity());
      std::fill(top2, top2 + kLanes, -std::numeric_limits<double>::infinity());
      std::fill(arg1, arg1 + kLanes, std::int64_t{-1});
      const std::size_t blocked = n - n % kLanes;
      for (std::size_t j0 = 0; j0 < blocked; j0 += kLanes) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          const double v = target_value(j0 + l);
          const bool better = v > top1[l];
          top2[l] = std::max(top2[l], std::min(top1[l], v));
          arg1[l] = better ? static_cast<std::int64_t>(j0 + l) : arg1[l];
          top1[l] = better ? v : top1[l];
        }
      }
      for (std::size_t j = blocked; j < n; ++j) {
        const double v = target_value(j);
        const std::size_t l = j - blocked;
        top2[l] = std::max(top2[l], std::min(top1[l], v));
        if (v > top1[l]) {
          top1[l] = v;
          arg1[l] = static_cast<std::int64_t>(j);
        }
      }
      double v1 = -std::numeric_limits<double>::infinity();
      double v2 = v1;
      std::size_t j1 = kUnassigned;
      for (std::size_t l = 0; l < kLanes; ++l) {
        if (arg1[l] < 0) continue;
        const auto j = static_cast<std::size_t>(arg1[l]);
        v2 = std::max(v2, top2[l]);
        if (top1[l] > v1 || (top1[l] == v1 && j < j1)) {
          v2 = std::max(v2, v1);
          v1 = top1[l];
          j1 = j;
        } else {
          v2 = std::max(v2, top1[l]);
        }
      }
      price[j1] += (n > 1 ? v1 - v2 : 0.0) + eps;
      if (owner[j1] != kUnassigned) {
        object_of[owner[j1]] = kUnassigned;
        queue.push_back(owner[j1]);
      }
      owner[j1] = i;
      object_of[i] = j1;
      ++bids;
    }

    if (!queue.empty()) {
      converged = false;
      break;
    }
    best_complete = object_of;
    if (eps <= eps_final) break;
    eps = std::max(eps * options.eps_factor, eps_final);
  }

  if (best_complete.empty()) {
    // no phase finished: complete the partial assignment with the nearest free targets
    best_complete = object_of;
    std::vector<char> taken(n, 0);
    for (auto j : best_complete) {
      if (j != kUnassigned) taken[j] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (best_complete[i] != kUnassigned) continue;
      std::size_t pick = kUnassigned;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (taken[j]) continue;
        const double d = (a[i] - b[j]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          pick = j;
        }
      }
      taken[pick] = 1;
      best_complete[i] = pick;
    }
  }

  m.assignment = std::move(best_complete);
  m.cost = matching_cost(a, b, m.assignment);
  m.converged = converged;
  return m;
}

std::vector<Vec3> emd_gradient(const PointCloud& a, const PointCloud& b, const Matching& matching) {
  check_sizes(a, b);
  const std::size_t n = a.size();
  std::vector<Vec3> grad(n, Vec3::Zero());
  if (n == 0) return grad;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 diff = a[i] - b[matching.assignment[i]];
    const double d = diff.norm();
    if (d >= 1e-12) grad[i] = diff * (inv_n / d);
  }
  return grad;
}

}  // namespace pcc
