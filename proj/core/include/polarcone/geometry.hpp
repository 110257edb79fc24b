#pragma once

#include <Eigen/Core>

#include <vector>

#include "polarcone/spaces.hpp"

namespace polarcone {

/// Closed convex cone cone{ sum_i lambda_i g_i : lambda_i >= 0 } given by a
/// finite generator list. Generators must be nonzero; duplicates and
/// near-parallel generators are kept as given.
struct FiniteCone {
  std::vector<PrimalVec> generators;

  /// Validates nonempty list, equal dimensions, nonzero generators.
  static FiniteCone make(std::vector<PrimalVec> generators);

  int dim() const;
  int size() const { return static_cast<int>(generators.size()); }

  /// n x m matrix with generators as columns.
  Eigen::MatrixXd generator_matrix() const;
};

/// Closed halfspace H_-(a) = { x : <a,x> <= 0 } with dual-unit normal.
struct Hypercone {
  DualVec normal;

  /// Normalizes `a` to dual-unit; throws if a = 0.
  static Hypercone make(const Space& space, DualVec a);
};

/// Dual arc delta(a,b): the normalized nonnegative combinations of two
/// independent dual-unit vectors. Contains no diametrally opposite points.
struct MeridianArc {
  DualVec endpoint_a;
  DualVec endpoint_b;

  /// Normalizes the endpoints to dual-unit and rejects dependent pairs
  /// (b within relative 1e-10 of +-a) with std::invalid_argument.
  static MeridianArc make(const Space& space, DualVec a, DualVec b);
};

/// m samples c(t_i) = ((1-t_i) a + t_i b) / ||...||*, t_i = i/(m-1).
/// Endpoints are returned exactly; every sample is dual-unit.
std::vector<DualVec> sample_arc(const Space& space, const MeridianArc& arc, int m);

/// sigma_{r+1}/sigma_1 of the k x n matrix whose rows are the inputs
/// normalized to unit Euclidean length. A value <= tol certifies the set is
/// within tol of an r-dimensional span. Requires k >= r+1.
double rank_residual(const std::vector<Eigen::VectorXd>& vectors, int target_rank);

/// det [u; v; w] for 3-vectors.
double dependence_det3(const Eigen::Vector3d& u, const Eigen::Vector3d& v,
                       const Eigen::Vector3d& w);

struct ConeMembership {
  bool inside = false;
  double residual = 0.0;        // Euclidean ||G lambda - x||
  Eigen::VectorXd coefficients; // minimizing lambda >= 0
};

/// Euclidean membership oracle: solves min_{lambda>=0} ||G lambda - x||_2 by
/// active-set nonnegative least squares; inside iff the residual is
/// <= tol * max(1, ||x||_2).
ConeMembership euclidean_cone_membership(const FiniteCone& cone, const PrimalVec& x,
                                         double tol = 1e-8);

/// Lawson-Hanson nonnegative least squares: argmin_{lambda>=0} ||A lambda - y||_2.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                     int max_iters = 0);

}  // namespace polarcone
