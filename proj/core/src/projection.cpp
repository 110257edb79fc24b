#include "polarcone/projection.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polarcone {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr int kMaxBacktracks = 80;
constexpr double kStepMin = 1e-8;
constexpr double kStepMax = 1e8;

}  // namespace

ProjectionResult project_cone(const Space& space, const FiniteCone& cone,
                              const PrimalVec& x, const SolverOptions& opts) {
  if (x.coords.size() != cone.dim() || cone.dim() != space.dim()) {
    throw std::invalid_argument("project_cone: dimension mismatch");
  }
  const Eigen::MatrixXd G = cone.generator_matrix();
  const int m = cone.size();

  auto objective = [&](const Eigen::VectorXd& lam) {
    const double r = space.norm(PrimalVec{x.coords - G * lam});
    return 0.5 * r * r;
  };
  auto gradient = [&](const Eigen::VectorXd& lam) {
    const DualVec j = space.duality_map(PrimalVec{x.coords - G * lam});
    return Eigen::VectorXd(-G.transpose() * j.coords);
  };
  auto pg_residual = [](const Eigen::VectorXd& lam, const Eigen::VectorXd& g) {
    return (lam - (lam - g).cwiseMax(0.0)).norm();
  };

  ProjectionResult result;
  if (space.is_lp()) {
    const double p = space.lp_exponent();
    if (p < 1.2 || p > 8.0) {
      result.warning = "exponent near the boundary of (1,inf): degenerate "
                       "gradients, expect reduced accuracy";
    }
  }

  Eigen::VectorXd lam = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = gradient(lam);
  double phi = objective(lam);
  double step = 1.0 / std::max(G.squaredNorm(), 1e-12);
  Eigen::VectorXd lam_prev = lam, g_prev = g;
  bool have_prev = false;

  // Declare convergence at opts.tol but keep polishing two orders further:
  // ill-conditioned generator sets amplify lambda-space error into point
  // error, and downstream consistency checks compose two solves.
  const double polish_tol = std::max(0.01 * opts.tol, 1e-13);

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const double resid = pg_residual(lam, g);
    if (resid <= opts.tol) result.converged = true;
    if (resid <= polish_tol) break;
    if (have_prev) {
      // Barzilai-Borwein guess, safeguarded; backtracking repairs the rest.
      const Eigen::VectorXd dl = lam - lam_prev;
      const Eigen::VectorXd dg = g - g_prev;
      const double denom = dl.dot(dg);
      if (denom > 0.0) step = dl.squaredNorm() / denom;
      step = std::clamp(step, kStepMin, kStepMax);
    }

    double s = step;
    Eigen::VectorXd lam_new;
    double phi_new = phi;
    bool moved = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      lam_new = (lam - s * g).cwiseMax(0.0);
      if ((lam_new - lam).norm() == 0.0) break;  // stuck at a fixed point
      phi_new = objective(lam_new);
      const double predicted = kArmijoC1 * g.dot(lam_new - lam);
      // Near the optimum the predicted decrease drops below the evaluation
      // noise of phi; the gradient is still accurate there, so take the
      // step unconditionally instead of stalling the line search.
      if (phi_new <= phi + predicted ||
          std::abs(predicted) <= 1e-14 * std::max(1.0, phi)) {
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) {
      // No acceptable step: treat the current iterate as final.
      break;
    }
    lam_prev = lam;
    g_prev = g;
    lam = lam_new;
    phi = phi_new;
    g = gradient(lam);
    have_prev = true;
  }

  result.point = PrimalVec{G * lam};
  result.coefficients = lam;
  result.distance = space.norm(PrimalVec{x.coords - result.point.coords});
  result.iterations = iter;
  result.kkt_residual = pg_residual(lam, g);
  if (!result.converged) result.converged = result.kkt_residual <= opts.tol;
  return result;
}

PrimalVec project_halfspace(const Space& space, const DualVec& a, const PrimalVec& x) {
  const double dn = space.dual_norm(a);
  if (dn <= 0.0) {
    throw std::invalid_argument("project_halfspace: zero normal");
  }
  const double s = pairing(a, x);
  if (s <= 0.0) return x;
  const PrimalVec ja = space.inverse_duality_map(a);
  const double dn2 = pairing(a, ja);  // equals dual_norm(a)^2
  return PrimalVec{x.coords - (s / dn2) * ja.coords};
}

RayProjection project_ray(const Space& space, const PrimalVec& u, const PrimalVec& x) {
  if (space.norm(u) <= 0.0) {
    throw std::invalid_argument("project_ray: zero direction");
  }
  if (x.coords.size() != u.coords.size()) {
    throw std::invalid_argument("project_ray: dimension mismatch");
  }
  // Derivative of 1/2 ||x - t u||^2; strictly increasing in t.
  auto deriv = [&](double t) {
    const DualVec j = space.duality_map(PrimalVec{x.coords - t * u.coords});
    return -pairing(j, u);
  };

  const double d0 = deriv(0.0);
  if (d0 >= 0.0) {
    return RayProjection{0.0, PrimalVec{Eigen::VectorXd::Zero(u.coords.size())}};
  }

  double hi = std::max(1.0, x.coords.norm() / u.coords.norm());
  double dhi = deriv(hi);
  for (int grow = 0; dhi < 0.0 && grow < 200; ++grow) {
    hi *= 2.0;
    dhi = deriv(hi);
  }

  double lo = 0.0;
  double t = hi;
  for (int it = 0; it < 300; ++it) {
    t = 0.5 * (lo + hi);
    const double d = deriv(t);
    if (std::abs(d) <= 1e-10) break;
    if (d < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
  }
  return RayProjection{t, PrimalVec{t * u.coords}};
}

PrimalVec euclidean_qp_oracle(const FiniteCone& cone, const PrimalVec& x) {
  const int n = cone.dim();
  const int m = cone.size();
  if (n > 6 || m > 8) {
    throw std::invalid_argument("euclidean_qp_oracle: size limits exceeded (dim<=6, m<=8)");
  }
  if (x.coords.size() != n) {
    throw std::invalid_argument("euclidean_qp_oracle: dimension mismatch");
  }
  const Eigen::MatrixXd G = cone.generator_matrix();

  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_dist = x.coords.norm();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    Eigen::MatrixXd Gs(n, idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) Gs.col(c) = G.col(idx[c]);
    Eigen::VectorXd lam = Gs.colPivHouseholderQr().solve(x.coords);
    if ((lam.array() < -1e-10).any()) continue;
    const Eigen::VectorXd point = Gs * lam.cwiseMax(0.0);
    const double dist = (x.coords - point).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = point;
    }
  }
  return PrimalVec{best};
}

}  // namespace polarcone
