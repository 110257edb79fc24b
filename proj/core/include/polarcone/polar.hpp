#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "polarcone/geometry.hpp"
#include "polarcone/projection.hpp"
#include "polarcone/spaces.hpp"

namespace polarcone {

/// Verdict for membership of x in the polar { y : <Jy,z> <= 0 for all z in K }.
struct MembershipVerdict {
  bool inside = false;
  /// max_g <Jx,g>/(||x|| ||g||); negative when strictly inside, 0 at x = 0.
  double margin = 0.0;
};

/// Membership test against the polar of a finitely generated cone. Testing
/// the generators suffices since z -> <Jx,z> is linear.
MembershipVerdict polar_membership(const Space& space, const FiniteCone& cone,
                                   const PrimalVec& x, double tol = 1e-9);

/// The polar of the hypercone H_-(a) is the halfline through J*(a):
/// returns u = J*(a)/||J*(a)||.
PrimalVec hypercone_polar_ray(const Space& space, const Hypercone& h);

/// Samples of the extreme-ray curve of the wedge polar: normalized J*(c_i)
/// for the m arc samples c_i.
std::vector<PrimalVec> wedge_polar_rays(const Space& space, const MeridianArc& arc,
                                        int m);

struct ConvexityWitness {
  PrimalVec u;
  PrimalVec v;
  double midpoint_margin = 0.0;  // ||P_W((u+v)/2)||, the violation
};

struct ConvexityReport {
  bool convex = false;
  double worst_violation = 0.0;
  std::optional<ConvexityWitness> witness;  // present iff not convex
  int pairs_tested = 0;
  int rays_sampled = 0;
  /// rank_residual of the sampled polar rays against a 2-dimensional span;
  /// the independent planarity route of the same certificate.
  double planarity_residual = 0.0;
};

struct WedgeCertifyOptions {
  double tol = 1e-6;        // certification tolerance on midpoint violations
  int max_sweeps = 50000;   // cyclic projection budget per midpoint
};

/// Certifies convexity of the polar of the wedge W(a,b). The wedge is
/// discretized to the m sampled hypercones H_-(c_i); a midpoint (u_i+u_j)/2
/// of two polar rays belongs to the polar iff its projection onto the
/// discretized wedge is 0. The projection runs Dykstra-style cyclic
/// halfspace projections. Violations are genuine up to arc-sampling
/// density. Throws std::runtime_error when a cyclic projection exhausts its
/// sweep budget.
ConvexityReport certify_wedge_polar_convexity(const Space& space, const MeridianArc& arc,
                                              int m, const WedgeCertifyOptions& opts = {});

struct CriterionFailure {
  DualVec a, b, c;
  double residual = 0.0;
  int trial = 0;
};

struct CriterionReport {
  int trials = 0;
  double max_residual = 0.0;
  bool holds = false;
  /// All per-trial rank residuals, in trial order.
  std::vector<double> residuals;
  /// The worst offending triples (at most `max_recorded_failures`),
  /// sorted by decreasing residual.
  std::vector<CriterionFailure> failures;
  int failure_count = 0;

  static constexpr int max_recorded_failures = 10;
};

/// Randomized test of the subspace-preservation criterion: draws dual-unit
/// a, b and c = unit(alpha a + beta b) per trial and measures the rank
/// residual of {J*a, J*b, J*c} against a 2-dimensional span. Holds iff the
/// max residual is <= tol.
CriterionReport subspace_criterion_check(const Space& space, int trials,
                                         double tol = 1e-8, std::uint64_t seed = 0);

/// The closed-form l_p counterexample data for the dual triple
/// a=(0,1,1), b=(1,0,1), c=(1,1,2): image directions and the 3x3
/// determinant 2 - 2^{q-1}, which vanishes iff p = 2.
struct LpCounterexample {
  double p = 0.0;
  double q = 0.0;
  double det_value = 0.0;
  std::array<Eigen::Vector3d, 3> vectors;  // a, b, c
  std::array<Eigen::Vector3d, 3> images;   // J* directions, unnormalized
};

/// Throws std::invalid_argument unless 1 < p < inf.
LpCounterexample lp_counterexample(double p);

struct PolarConsistencySample {
  double membership_margin = 0.0;    // polar margin of r = x - P_K x
  double projection_residual = 0.0;  // ||P_K r|| / max(1, ||r||)
  double residual_norm = 0.0;        // ||r||
};

/// Diagnostic for the representation of the polar as (I - P_K)(X):
/// statistics only, no pass/fail.
struct PolarConsistencyReport {
  int samples = 0;
  double max_membership_margin = 0.0;
  double max_projection_residual = 0.0;
  std::vector<PolarConsistencySample> records;
};

/// For random x, records how close the projection residual x - P_K x comes
/// to the polar (membership margin and ||P_K r||). Solver failures
/// propagate as std::runtime_error.
PolarConsistencyReport projection_polar_consistency(const Space& space,
                                                    const FiniteCone& cone, int samples,
                                                    std::uint64_t seed = 0);

}  // namespace polarcone
