#include "polarcone/polar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>

#include "polarcone/random.hpp"

namespace polarcone {

MembershipVerdict polar_membership(const Space& space, const FiniteCone& cone,
                                   const PrimalVec& x, double tol) {
  if (x.coords.size() != cone.dim() || cone.dim() != space.dim()) {
    throw std::invalid_argument("polar_membership: dimension mismatch");
  }
  const double nx = space.norm(x);
  if (nx <= 1e-300) {
    return MembershipVerdict{true, 0.0};  // 0 is in every polar
  }
  const DualVec jx = space.duality_map(x);
  double margin = -std::numeric_limits<double>::infinity();
  for (const auto& g : cone.generators) {
    const double ng = space.norm(g);
    margin = std::max(margin, pairing(jx, g) / (nx * ng));
  }
  return MembershipVerdict{margin <= tol, margin};
}

PrimalVec hypercone_polar_ray(const Space& space, const Hypercone& h) {
  PrimalVec u = space.inverse_duality_map(h.normal);
  const double nu = space.norm(u);
  if (nu <= 0.0) {
    throw std::invalid_argument("hypercone_polar_ray: degenerate normal");
  }
  u.coords /= nu;
  return u;
}

std::vector<PrimalVec> wedge_polar_rays(const Space& space, const MeridianArc& arc,
                                        int m) {
  const auto samples = sample_arc(space, arc, m);
  std::vector<PrimalVec> rays;
  rays.reserve(samples.size());
  for (const auto& c : samples) {
    PrimalVec u = space.inverse_duality_map(c);
    u.coords /= space.norm(u);  // J* maps S* onto S; this removes roundoff
    rays.push_back(std::move(u));
  }
  return rays;
}

namespace {

// Precomputed halfspace data for the discretized wedge: dual-unit normals
// with their J* images, so one halfspace projection costs a dot product
// and an axpy.
struct WedgeHalfspaces {
  std::vector<Eigen::VectorXd> normals;
  std::vector<Eigen::VectorXd> jstar;
  std::vector<double> pairing_norm2;  // <c, J*c> = ||c||*^2
};

// Bisection (endpoints first, then recursive midpoints) visit order for the
// arc samples. Consecutive arc samples are nearly parallel, and a
// sequential cycle through such a fan crawls; maximizing the angular
// separation between consecutive visits cuts the sweep counts by orders of
// magnitude. Any fixed cycle is an admissible Dykstra control.
std::vector<int> bisection_order(int m) {
  std::vector<int> order = {0, m - 1};
  std::deque<std::pair<int, int>> segments{{0, m - 1}};
  while (!segments.empty()) {
    const auto [lo, hi] = segments.front();
    segments.pop_front();
    const int mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) continue;
    order.push_back(mid);
    segments.push_back({lo, mid});
    segments.push_back({mid, hi});
  }
  return order;
}

// Halfspace data stored in visit order.
WedgeHalfspaces wedge_halfspaces(const Space& space, const std::vector<DualVec>& samples) {
  WedgeHalfspaces w;
  const auto order = bisection_order(static_cast<int>(samples.size()));
  w.normals.reserve(samples.size());
  w.jstar.reserve(samples.size());
  w.pairing_norm2.reserve(samples.size());
  for (int idx : order) {
    const DualVec& c = samples[idx];
    const PrimalVec jc = space.inverse_duality_map(c);
    w.normals.push_back(c.coords);
    w.jstar.push_back(jc.coords);
    w.pairing_norm2.push_back(c.coords.dot(jc.coords));
  }
  return w;
}

struct DykstraOutcome {
  double violation = 0.0;  // certified lower bound on ||limit||
  int sweeps = 0;
  bool converged = false;
};

// Dykstra-style cyclic projection of v onto the intersection of the
// halfspaces { x : <c_i, x> <= 0 }, run only as far as the membership
// decision needs. The tail of the iteration is linear, so the recent
// movement ratio bounds the distance to the limit:
//   ||x_k - x_inf|| <= move_k * rho/(1-rho).
// With gap = 2x that bound the iteration stops when the limit norm is
// decided against `pass_cut` (certified pass) or when the violation value
// is resolved to 2%. The reported violation is the certified lower bound
// max(0, ||x_k|| - gap), which is what the convexity verdict consumes.
DykstraOutcome dykstra_decide(const Space& space, const WedgeHalfspaces& w,
                              const Eigen::VectorXd& v, double floor_norm,
                              double pass_cut, int max_sweeps) {
  const std::size_t k = w.normals.size();
  Eigen::VectorXd x = v;
  std::vector<Eigen::VectorXd> corr(k, Eigen::VectorXd::Zero(v.size()));
  const double scale = std::max(1.0, v.norm());

  constexpr int kWindow = 10;
  double moves[kWindow] = {0};

  DykstraOutcome out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Eigen::VectorXd x_before = x;
    for (std::size_t i = 0; i < k; ++i) {
      const Eigen::VectorXd wv = x + corr[i];
      const double s = w.normals[i].dot(wv);
      if (s > 0.0) {
        x = wv - (s / w.pairing_norm2[i]) * w.jstar[i];
      } else {
        x = wv;
      }
      corr[i] = wv - x;
    }
    out.sweeps = sweep + 1;

    const double nx = space.norm(PrimalVec{x});
    const double move = space.norm(PrimalVec{x - x_before});
    moves[sweep % kWindow] = move;

    if (nx <= floor_norm || move <= 1e-14 * scale) {
      out.violation = nx;
      out.converged = true;
      return out;
    }
    if (sweep >= kWindow) {
      double rho = 0.0;
      for (int i = 1; i < kWindow; ++i) {
        const double prev = moves[(sweep - i) % kWindow];
        const double cur = moves[(sweep - i + 1) % kWindow];
        if (prev > 0.0) rho = std::max(rho, cur / prev);
      }
      if (rho < 1.0) {
        const double gap = 2.0 * move * rho / (1.0 - rho);
        if (nx + gap <= pass_cut || gap <= 0.02 * nx) {
          out.violation = std::max(0.0, nx - gap);
          out.converged = true;
          return out;
        }
      }
    }
  }
  out.violation = std::max(0.0, space.norm(PrimalVec{x}));
  return out;
}

}  // namespace

ConvexityReport certify_wedge_polar_convexity(const Space& space, const MeridianArc& arc,
                                              int m, const WedgeCertifyOptions& opts) {
  const auto samples = sample_arc(space, arc, m);
  const auto halfspaces = wedge_halfspaces(space, samples);
  const auto rays = wedge_polar_rays(space, arc, m);

  ConvexityReport report;
  report.rays_sampled = m;

  std::vector<Eigen::VectorXd> ray_coords;
  ray_coords.reserve(rays.size());
  for (const auto& r : rays) ray_coords.push_back(r.coords);
  report.planarity_residual = rank_residual(ray_coords, 2);

  // Below this the projected midpoint counts as 0; two orders under the
  // certification tolerance so the verdict is never borderline.
  const double floor_norm = std::min(1e-8, 0.01 * opts.tol);

  double worst = 0.0;
  int worst_i = -1, worst_j = -1;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Eigen::VectorXd mid = 0.5 * (rays[i].coords + rays[j].coords);
      // A midpoint already dominated by the running worst cannot move the
      // verdict, so the decision cut tightens as violations are found.
      const double pass_cut = std::max(0.9 * opts.tol, worst);
      const auto outcome =
          dykstra_decide(space, halfspaces, mid, floor_norm, pass_cut, opts.max_sweeps);
      if (!outcome.converged) {
        throw std::runtime_error(
            "certify_wedge_polar_convexity: cyclic projection exhausted its sweep budget");
      }
      if (outcome.violation > worst) {
        worst = outcome.violation;
        worst_i = i;
        worst_j = j;
      }
      ++report.pairs_tested;
    }
  }

  report.worst_violation = worst;
  report.convex = worst <= opts.tol;
  if (!report.convex) {
    report.witness = ConvexityWitness{rays[worst_i], rays[worst_j], worst};
  }
  return report;
}

namespace {

DualVec draw_dual_unit(const Space& space, GaussianSampler& rng) {
  for (;;) {
    DualVec a{rng.vector(space.dim())};
    const double dn = space.dual_norm(a);
    if (dn > 1e-6) {
      a.coords /= dn;
      return a;
    }
  }
}

}  // namespace

CriterionReport subspace_criterion_check(const Space& space, int trials, double tol,
                                         std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("subspace_criterion_check: trials must be >= 1");
  }
  GaussianSampler rng(seed);

  CriterionReport report;
  report.trials = trials;
  report.residuals.reserve(trials);

  struct Triple {
    DualVec a, b, c;
    double residual;
    int trial;
  };
  std::vector<Triple> offenders;

  for (int t = 0; t < trials; ++t) {
    const DualVec a = draw_dual_unit(space, rng);
    const DualVec b = draw_dual_unit(space, rng);
    DualVec c;
    for (;;) {
      double alpha = rng.normal();
      double beta = rng.normal();
      if (alpha <= 0.0 && beta <= 0.0) continue;
      c.coords = alpha * a.coords + beta * b.coords;
      const double dn = space.dual_norm(c);
      if (dn > 1e-9) {
        c.coords /= dn;
        break;
      }
    }
    const std::vector<Eigen::VectorXd> images{space.inverse_duality_map(a).coords,
                                              space.inverse_duality_map(b).coords,
                                              space.inverse_duality_map(c).coords};
    const double residual = rank_residual(images, 2);
    report.residuals.push_back(residual);
    report.max_residual = std::max(report.max_residual, residual);
    if (residual > tol) {
      ++report.failure_count;
      offenders.push_back(Triple{a, b, c, residual, t});
    }
  }

  std::sort(offenders.begin(), offenders.end(), [](const Triple& l, const Triple& r) {
    if (l.residual != r.residual) return l.residual > r.residual;
    return l.trial < r.trial;
  });
  const int keep = std::min<int>(CriterionReport::max_recorded_failures,
                                 static_cast<int>(offenders.size()));
  for (int i = 0; i < keep; ++i) {
    report.failures.push_back(CriterionFailure{offenders[i].a, offenders[i].b,
                                               offenders[i].c, offenders[i].residual,
                                               offenders[i].trial});
  }
  report.holds = report.max_residual <= tol;
  return report;
}

LpCounterexample lp_counterexample(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("lp_counterexample: p must satisfy 1<p<inf");
  }
  LpCounterexample out;
  out.p = p;
  out.q = p / (p - 1.0);
  out.vectors = {Eigen::Vector3d(0, 1, 1), Eigen::Vector3d(1, 0, 1),
                 Eigen::Vector3d(1, 1, 2)};
  const double scaled = std::pow(2.0, out.q - 1.0);
  out.images = {Eigen::Vector3d(0, 1, 1), Eigen::Vector3d(1, 0, 1),
                Eigen::Vector3d(1, 1, scaled)};
  out.det_value = 2.0 - scaled;
  return out;
}

PolarConsistencyReport projection_polar_consistency(const Space& space,
                                                    const FiniteCone& cone, int samples,
                                                    std::uint64_t seed) {
  GaussianSampler rng(seed);
  PolarConsistencyReport report;
  report.samples = samples;
  report.records.reserve(samples);

  for (int s = 0; s < samples; ++s) {
    const PrimalVec x{rng.vector(space.dim())};
    const ProjectionResult px = project_cone(space, cone, x);
    if (!px.converged) {
      throw std::runtime_error("projection_polar_consistency: projection solver failed");
    }
    const PrimalVec r{x.coords - px.point.coords};
    const double rn = space.norm(r);

    PolarConsistencySample rec;
    rec.residual_norm = rn;
    rec.membership_margin = polar_membership(space, cone, r).margin;

    const ProjectionResult pr = project_cone(space, cone, r);
    if (!pr.converged) {
      throw std::runtime_error("projection_polar_consistency: projection solver failed");
    }
    rec.projection_residual = space.norm(pr.point) / std::max(1.0, rn);

    report.max_membership_margin = std::max(report.max_membership_margin,
                                            rec.membership_margin);
    report.max_projection_residual = std::max(report.max_projection_residual,
                                              rec.projection_residual);
    report.records.push_back(rec);
  }
  return report;
}

}  // namespace polarcone
