#include "polarcone/spaces.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polarcone {

namespace {

// |v|^e * sign(v) with the continuous limit 0 at v = 0 (needed for
// exponents below 1, where the bare power expression blows up).
double signed_pow(double v, double e) {
  if (v == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(v), e), v);
}

// Scale-safe p-norm: factor out the max coordinate before powering.
double p_norm(const Eigen::VectorXd& v, double p) {
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s += std::pow(std::abs(v[i]) / m, p);
  }
  return m * std::pow(s, 1.0 / p);
}

// J for the p-norm in the Definition-1 normalization:
//   (Jx)_i = ||x||^{2-p} |x_i|^{p-2} x_i.
// Evaluated on the unit rescaling u = x/||x|| so intermediate powers stay
// in [0,1].
Eigen::VectorXd lp_duality(const Eigen::VectorXd& x, double p) {
  const double nrm = p_norm(x, p);
  if (nrm == 0.0) return Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = nrm * signed_pow(x[i] / nrm, p - 1.0);
  }
  return out;
}

}  // namespace

int SpaceSpec::dim() const {
  if (const auto* lp = std::get_if<LpSpec>(&family)) return lp->dim;
  return static_cast<int>(std::get<QuadraticSpec>(family).matrix.rows());
}

SpaceSpec SpaceSpec::lp(int dim, double exponent) {
  return SpaceSpec{LpSpec{dim, exponent}};
}

SpaceSpec SpaceSpec::quadratic(Eigen::MatrixXd matrix) {
  return SpaceSpec{QuadraticSpec{std::move(matrix)}};
}

std::vector<std::string> validate_space(const SpaceSpec& spec) {
  std::vector<std::string> violations;
  if (const auto* lp = std::get_if<LpSpec>(&spec.family)) {
    if (lp->dim < 2) violations.push_back("dimension must be at least 2");
    if (!(lp->exponent > 1.0) || !std::isfinite(lp->exponent)) {
      violations.push_back("p must satisfy 1<p<inf");
    }
  } else {
    const Eigen::MatrixXd& A = std::get<QuadraticSpec>(spec.family).matrix;
    if (A.rows() != A.cols()) {
      violations.push_back("matrix must be square");
      return violations;
    }
    if (A.rows() < 2) violations.push_back("dimension must be at least 2");
    const double scale = A.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      violations.push_back("matrix entries must be finite and not all zero");
      return violations;
    }
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
      violations.push_back("matrix not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
      violations.push_back("matrix not positive definite");
    }
  }
  return violations;
}

Space::Space(SpaceSpec spec) : spec_(std::move(spec)) {
  const auto violations = validate_space(spec_);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid space:";
    for (const auto& v : violations) msg << " " << v << ";";
    throw std::invalid_argument(msg.str());
  }
  dim_ = spec_.dim();
  if (auto* quad = std::get_if<QuadraticSpec>(&spec_.family)) {
    quad->matrix = (0.5 * (quad->matrix + quad->matrix.transpose())).eval();
    llt_.compute(quad->matrix);
    if (llt_.info() != Eigen::Success) {
      throw std::invalid_argument("invalid space: Cholesky factorization failed");
    }
  }
}

double Space::lp_exponent() const {
  return std::get<LpSpec>(spec_.family).exponent;
}

double Space::dual_exponent() const {
  const double p = lp_exponent();
  return p / (p - 1.0);
}

const Eigen::MatrixXd& Space::quadratic_matrix() const {
  return std::get<QuadraticSpec>(spec_.family).matrix;
}

void Space::check_dim(Eigen::Index got, const char* what) const {
  if (got != dim_) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch, expected " << dim_ << ", got " << got;
    throw std::invalid_argument(msg.str());
  }
}

double Space::norm(const PrimalVec& x) const {
  check_dim(x.coords.size(), "norm");
  if (is_lp()) return p_norm(x.coords, lp_exponent());
  const double q = x.coords.dot(quadratic_matrix() * x.coords);
  return std::sqrt(std::max(q, 0.0));
}

double Space::dual_norm(const DualVec& a) const {
  check_dim(a.coords.size(), "dual_norm");
  if (is_lp()) return p_norm(a.coords, dual_exponent());
  const double q = a.coords.dot(llt_.solve(a.coords));
  return std::sqrt(std::max(q, 0.0));
}

DualVec Space::duality_map(const PrimalVec& x) const {
  check_dim(x.coords.size(), "duality_map");
  if (is_lp()) return DualVec{lp_duality(x.coords, lp_exponent())};
  return DualVec{quadratic_matrix() * x.coords};
}

PrimalVec Space::inverse_duality_map(const DualVec& a) const {
  check_dim(a.coords.size(), "inverse_duality_map");
  if (is_lp()) return PrimalVec{lp_duality(a.coords, dual_exponent())};
  return PrimalVec{llt_.solve(a.coords)};
}

double pairing(const DualVec& a, const PrimalVec& x) {
  if (a.coords.size() != x.coords.size()) {
    throw std::invalid_argument("pairing: dimension mismatch");
  }
  return a.coords.dot(x.coords);
}

}  // namespace polarcone
