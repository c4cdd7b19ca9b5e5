#pragma once

#include "pcc/geometry/point_cloud.hpp"

#include <cstddef>
#include <vector>

namespace pcc {

/// Bijection between two equal-size clouds and its mean matched Euclidean distance.
struct Matching {
  /// assignment[i] is the index in the second cloud matched to point i of the first.
  std::vector<std::size_t> assignment;
  double cost = 0.0;
  /// false when an approximate solver hit its iteration cap.
  bool converged = true;
};

/// (1/n) * sum_i |a_i - b_{assignment(i)}|, summed in index order.
double matching_cost(const PointCloud& a, const PointCloud& b,
                     const std::vector<std::size_t>& assignment);

bool is_permutation(const std::vector<std::size_t>& assignment, std::size_t n);

/// Exact earth mover's distance via the Hungarian algorithm on the dense distance matrix.
/// O(n^3) time, O(n^2) memory; intended for n <= 1024.
Matching emd_exact(const PointCloud& a, const PointCloud& b);

inline constexpr std::size_t kMaxExactEmdPoints = 1024;

struct AuctionOptions {
  double eps_initial = 1.0;
  double eps_factor = 0.25;
  /// <= 0 selects 1e-4 / n.
  double eps_final = 0.0;
  /// Bid cap per epsilon phase; 0 selects 50 * n.
  std::size_t max_bids_per_phase = 0;
};

/// Approximate earth mover's distance by epsilon-scaling forward auction. Distances are
/// evaluated on the fly, so memory beyond the inputs is O(n). The returned cost is within
/// eps_final of the optimum when converged.
Matching emd_approx(const PointCloud& a, const PointCloud& b, const AuctionOptions& options = {});

/// Gradient of the fixed-matching mean distance with respect to each point of `a`.
/// Pairs closer than 1e-12 contribute a zero vector.
std::vector<Vec3> emd_gradient(const PointCloud& a, const PointCloud& b, const Matching& matching);

}  // namespace pcc
