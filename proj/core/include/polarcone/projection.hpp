#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

#include "polarcone/geometry.hpp"
#include "polarcone/spaces.hpp"

namespace polarcone {

struct SolverOptions {
  double tol = 1e-8;        // projected-gradient residual
  int max_iters = 50000;
  std::uint64_t seed = 0;   // reserved for randomized restarts
};

/// Outcome of a cone projection P_K x. `point` is contractual; the
/// coefficient vector is diagnostic (non-unique with redundant generators).
struct ProjectionResult {
  PrimalVec point;
  Eigen::VectorXd coefficients;
  double distance = 0.0;      // ||x - point|| in the space norm
  int iterations = 0;
  double kkt_residual = 0.0;  // projected-gradient residual at exit
  bool converged = false;
  std::string warning;        // conditioning warnings, empty when clean
};

/// Metric projection onto a finitely generated cone: minimizes
///   phi(lambda) = 1/2 ||x - G lambda||^2   over lambda >= 0
/// in the space norm by projected gradient with backtracking line search.
/// The gradient is -G^T J(x - G lambda) since d/dy 1/2||y||^2 = Jy in a
/// smooth space. On non-convergence the result carries the best iterate
/// with converged = false.
ProjectionResult project_cone(const Space& space, const FiniteCone& cone,
                              const PrimalVec& x, const SolverOptions& opts = {});

/// Metric projection onto the halfspace H_-(a) = { y : <a,y> <= 0 }:
/// returns x when inside, otherwise x - (<a,x>/<a,J*a>) J*(a).
/// Throws std::invalid_argument when a = 0.
PrimalVec project_halfspace(const Space& space, const DualVec& a, const PrimalVec& x);

struct RayProjection {
  double t = 0.0;   // minimizer of ||x - t u|| over t >= 0
  PrimalVec point;  // t * u
};

/// Metric projection onto the ray [0,u: bisection on the strictly
/// increasing derivative -<J(x - t u), u>. Throws when u = 0.
RayProjection project_ray(const Space& space, const PrimalVec& u, const PrimalVec& x);

/// Exact Euclidean projection onto a small cone by enumerating active sets
/// (ground truth for the l_2 case). Requires dim <= 6 and m <= 8 generators.
PrimalVec euclidean_qp_oracle(const FiniteCone& cone, const PrimalVec& x);

}  // namespace polarcone
