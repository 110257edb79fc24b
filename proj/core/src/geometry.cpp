#include "polarcone/geometry.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace polarcone {

FiniteCone FiniteCone::make(std::vector<PrimalVec> generators) {
  if (generators.empty()) {
    throw std::invalid_argument("FiniteCone: at least one generator required");
  }
  const Eigen::Index n = generators.front().coords.size();
  for (const auto& g : generators) {
    if (g.coords.size() != n) {
      throw std::invalid_argument("FiniteCone: generators have mixed dimensions");
    }
    if (g.coords.norm() <= 1e-12) {
      throw std::invalid_argument("FiniteCone: zero generator");
    }
  }
  return FiniteCone{std::move(generators)};
}

int FiniteCone::dim() const {
  return static_cast<int>(generators.front().coords.size());
}

Eigen::MatrixXd FiniteCone::generator_matrix() const {
  Eigen::MatrixXd G(dim(), size());
  for (int j = 0; j < size(); ++j) G.col(j) = generators[j].coords;
  return G;
}

Hypercone Hypercone::make(const Space& space, DualVec a) {
  const double dn = space.dual_norm(a);
  if (dn <= 0.0) {
    throw std::invalid_argument("Hypercone: zero normal");
  }
  a.coords /= dn;
  return Hypercone{std::move(a)};
}

MeridianArc MeridianArc::make(const Space& space, DualVec a, DualVec b) {
  const double na = space.dual_norm(a);
  const double nb = space.dual_norm(b);
  if (na <= 0.0 || nb <= 0.0) {
    throw std::invalid_argument("MeridianArc: endpoints must be nonzero");
  }
  a.coords /= na;
  b.coords /= nb;
  // Independence in the Euclidean chart; rejects b within 1e-10 of +-a.
  std::vector<Eigen::VectorXd> rows{a.coords, b.coords};
  if (rank_residual(rows, 1) <= 1e-10) {
    throw std::invalid_argument("MeridianArc: endpoints are linearly dependent");
  }
  return MeridianArc{std::move(a), std::move(b)};
}

std::vector<DualVec> sample_arc(const Space& space, const MeridianArc& arc, int m) {
  if (m < 2) {
    throw std::invalid_argument("sample_arc: need at least 2 samples");
  }
  std::vector<DualVec> out;
  out.reserve(m);
  out.push_back(arc.endpoint_a);
  for (int i = 1; i + 1 < m; ++i) {
    const double t = static_cast<double>(i) / (m - 1);
    DualVec c{(1.0 - t) * arc.endpoint_a.coords + t * arc.endpoint_b.coords};
    c.coords /= space.dual_norm(c);
    out.push_back(std::move(c));
  }
  out.push_back(arc.endpoint_b);
  return out;
}

double rank_residual(const std::vector<Eigen::VectorXd>& vectors, int target_rank) {
  const int k = static_cast<int>(vectors.size());
  if (target_rank < 1) {
    throw std::invalid_argument("rank_residual: target rank must be positive");
  }
  if (k <= target_rank) {
    throw std::invalid_argument("rank_residual: need more vectors than the target rank");
  }
  const Eigen::Index n = vectors.front().size();
  Eigen::MatrixXd M(k, n);
  for (int i = 0; i < k; ++i) {
    if (vectors[i].size() != n) {
      throw std::invalid_argument("rank_residual: mixed dimensions");
    }
    const double nrm = vectors[i].norm();
    M.row(i) = vectors[i].transpose();
    if (nrm > 0.0) M.row(i) /= nrm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() <= target_rank || sv[0] <= 0.0) return 0.0;
  return sv[target_rank] / sv[0];
}

double dependence_det3(const Eigen::Vector3d& u, const Eigen::Vector3d& v,
                       const Eigen::Vector3d& w) {
  Eigen::Matrix3d M;
  M.row(0) = u;
  M.row(1) = v;
  M.row(2) = w;
  return M.determinant();
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, int max_iters) {
  // Lawson-Hanson active set. The passive-set least squares subproblems are
  // solved by column-pivoted QR; exact termination for small m.
  const int m = static_cast<int>(A.cols());
  if (max_iters <= 0) max_iters = 3 * m + 30;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(m, false);
  const double wtol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff());

  auto solve_passive = [&](const std::vector<bool>& set) {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j) {
      if (set[j]) idx.push_back(j);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    if (idx.empty()) return z;
    Eigen::MatrixXd Ap(A.rows(), idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(c) = A.col(idx[c]);
    Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(y);
    for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zp[c];
    return z;
  };

  for (int outer = 0; outer < max_iters; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (y - A * x);
    int best = -1;
    double wmax = wtol;
    for (int j = 0; j < m; ++j) {
      if (!passive[j] && w[j] > wmax) {
        wmax = w[j];
        best = j;
      }
    }
    if (best < 0) break;  // KKT satisfied
    passive[best] = true;

    Eigen::VectorXd z = solve_passive(passive);
    int inner = 0;
    while (true) {
      double zmin = 0.0;
      for (int j = 0; j < m; ++j) {
        if (passive[j]) zmin = std::min(zmin, z[j]);
      }
      if (zmin >= 0.0 || ++inner > max_iters) break;
      // Step toward z until the first passive coefficient hits zero.
      double alpha = 1.0;
      for (int j = 0; j < m; ++j) {
        if (passive[j] && z[j] < 0.0) {
          alpha = std::min(alpha, x[j] / (x[j] - z[j]));
        }
      }
      x += alpha * (z - x);
      for (int j = 0; j < m; ++j) {
        if (passive[j] && x[j] <= 1e-14) {
          x[j] = 0.0;
          passive[j] = false;
        }
      }
      z = solve_passive(passive);
    }
    x = z;
  }
  return x.cwiseMax(0.0);
}

ConeMembership euclidean_cone_membership(const FiniteCone& cone, const PrimalVec& x,
                                         double tol) {
  if (x.coords.size() != cone.dim()) {
    throw std::invalid_argument("euclidean_cone_membership: dimension mismatch");
  }
  const Eigen::MatrixXd G = cone.generator_matrix();
  ConeMembership result;
  result.coefficients = nnls(G, x.coords);
  result.residual = (G * result.coefficients - x.coords).norm();
  result.inside = result.residual <= tol * std::max(1.0, x.coords.norm());
  return result;
}

}  // namespace polarcone
