#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace polarcone {

/// Vector in the primal space X. The tag type keeps primal and dual
/// arguments from being swapped silently; the coordinate basis is shared.
struct PrimalVec {
  Eigen::VectorXd coords;
};

/// Vector in the dual space X*.
struct DualVec {
  Eigen::VectorXd coords;
};

/// l_p norm family on R^n, 1 < p < inf.
struct LpSpec {
  int dim = 0;
  double exponent = 0.0;
};

/// Quadratic norm ||x|| = sqrt(x^T A x) for symmetric positive definite A.
struct QuadraticSpec {
  Eigen::MatrixXd matrix;
};

/// Declarative description of a norm; validate with validate_space(),
/// turn into a usable space with Space.
struct SpaceSpec {
  std::variant<LpSpec, QuadraticSpec> family;

  int dim() const;

  static SpaceSpec lp(int dim, double exponent);
  static SpaceSpec quadratic(Eigen::MatrixXd matrix);
};

/// Returns the list of violated invariants; empty means the spec is valid.
std::vector<std::string> validate_space(const SpaceSpec& spec);

/// A validated finite-dimensional Banach space. Immutable after
/// construction (the quadratic family caches a Cholesky factorization,
/// never the explicit inverse) and safe to share across threads.
class Space {
 public:
  /// Throws std::invalid_argument when the spec violates an invariant.
  explicit Space(SpaceSpec spec);

  int dim() const { return dim_; }
  bool is_lp() const { return std::holds_alternative<LpSpec>(spec_.family); }
  bool is_quadratic() const { return !is_lp(); }

  /// Primal exponent p (l_p family only).
  double lp_exponent() const;
  /// Dual exponent q = p/(p-1) (l_p family only).
  double dual_exponent() const;
  const Eigen::MatrixXd& quadratic_matrix() const;

  const SpaceSpec& spec() const { return spec_; }

  double norm(const PrimalVec& x) const;
  double dual_norm(const DualVec& a) const;

  /// Normalized duality map J: <Jx,x> = ||x||^2 and ||Jx||* = ||x||.
  DualVec duality_map(const PrimalVec& x) const;

  /// Inverse J* of the duality map: J(J*(a)) = a.
  PrimalVec inverse_duality_map(const DualVec& a) const;

 private:
  SpaceSpec spec_;
  int dim_ = 0;
  Eigen::LLT<Eigen::MatrixXd> llt_;  // quadratic family only

  void check_dim(Eigen::Index got, const char* what) const;
};

/// Duality pairing <a,x>: the coordinate dot product in this model.
/// Throws on dimension mismatch.
double pairing(const DualVec& a, const PrimalVec& x);

}  // namespace polarcone
