#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

#include "polarcone/random.hpp"
#include "polarcone/spaces.hpp"
#include "support/test_util.hpp"

using namespace polarcone;
using test_util::dv;
using test_util::pv;
using test_util::vec;

namespace {

// Relative gap between two vectors, floored at 1.
double rel_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

// Collinearity with a positive factor: ||u - s v|| with s = <u,v>/<v,v>.
double positive_ray_gap(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double s = u.dot(v) / v.dot(v);
  REQUIRE(s > 0.0);
  return (u - s * v).norm() / u.norm();
}

}  // namespace

TEST_CASE("validate_space verdicts") {
  CHECK(validate_space(SpaceSpec::lp(3, 2.0)).empty());
  CHECK(validate_space(SpaceSpec::lp(3, 1.0001)).empty());

  auto v = validate_space(SpaceSpec::lp(3, 1.0));
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "p must satisfy 1<p<inf");
  CHECK(!validate_space(SpaceSpec::lp(3, 0.5)).empty());
  CHECK(!validate_space(SpaceSpec::lp(1, 2.0)).empty());

  Eigen::MatrixXd indefinite = vec({1, -1, 1}).asDiagonal();
  v = validate_space(SpaceSpec::quadratic(indefinite));
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "matrix not positive definite");

  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK(!validate_space(SpaceSpec::quadratic(asym)).empty());

  CHECK(validate_space(SpaceSpec::quadratic(Eigen::MatrixXd::Identity(3, 3))).empty());
  CHECK_THROWS_AS(Space(SpaceSpec::lp(3, 1.0)), std::invalid_argument);
}

TEST_CASE("norm closed-form values") {
  Space l2(SpaceSpec::lp(3, 2.0));
  CHECK(l2.norm(pv({3, 4, 0})) == doctest::Approx(5.0).epsilon(1e-14));

  Space l3(SpaceSpec::lp(3, 3.0));
  CHECK(l3.norm(pv({1, 1, 1})) == doctest::Approx(std::cbrt(3.0)).epsilon(1e-14));

  Space quad(SpaceSpec::quadratic(Eigen::MatrixXd::Identity(3, 3)));
  CHECK(quad.norm(pv({1, 2, 2})) == doctest::Approx(3.0).epsilon(1e-14));

  CHECK(l3.norm(pv({0, 0, 0})) == 0.0);
}

TEST_CASE("dual_norm closed-form values") {
  Space l2(SpaceSpec::lp(3, 2.0));
  CHECK(l2.dual_norm(dv({0, 3, 4})) == doctest::Approx(5.0).epsilon(1e-14));

  // p = 3 so q = 3/2: ||(1,1)||_q = 2^{2/3}.
  Space l3(SpaceSpec::lp(2, 3.0));
  CHECK(l3.dual_norm(dv({1, 1})) ==
        doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));

  Eigen::MatrixXd A = vec({4, 1}).asDiagonal();
  Space quad(SpaceSpec::quadratic(A));
  CHECK(quad.dual_norm(dv({2, 0})) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pairing and Hoelder") {
  CHECK(pairing(dv({1, 0, 0}), pv({5, 7, 9})) == 5.0);
  CHECK(pairing(dv({0, 0, 0}), pv({1, -2, 3})) == 0.0);
  CHECK(pairing(dv({1, 1, 2}), pv({1, 1, 2})) == 6.0);
  CHECK_THROWS_AS(pairing(dv({1, 2}), pv({1, 2, 3})), std::invalid_argument);

  GaussianSampler rng(5);
  for (const Space& space : test_util::space_matrix()) {
    for (int i = 0; i < 200; ++i) {
      const DualVec a{rng.vector(space.dim())};
      const PrimalVec x{rng.vector(space.dim())};
      CHECK(std::abs(pairing(a, x)) <=
            space.dual_norm(a) * space.norm(x) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("duality map closed forms") {
  Space l2(SpaceSpec::lp(4, 2.0));
  GaussianSampler rng(17);
  for (int i = 0; i < 20; ++i) {
    const PrimalVec x{rng.vector(4)};
    CHECK(rel_gap(l2.duality_map(x).coords, x.coords) <= 1e-14);
  }

  const Eigen::MatrixXd A = random_spd_matrix(4, 33);
  Space quad(SpaceSpec::quadratic(A));
  for (int i = 0; i < 20; ++i) {
    const PrimalVec x{rng.vector(4)};
    CHECK(rel_gap(quad.duality_map(x).coords, A * x.coords) <= 1e-14);
  }

  Space l3(SpaceSpec::lp(3, 3.0));
  CHECK(rel_gap(l3.duality_map(pv({1, 0, 0})).coords, vec({1, 0, 0})) <= 1e-14);
  CHECK(l3.duality_map(pv({0, 0, 0})).coords.norm() == 0.0);

  // p < 2 with zero coordinates: |x_i|^{p-2} x_i takes its continuous limit 0.
  Space l15(SpaceSpec::lp(3, 1.5));
  CHECK(rel_gap(l15.duality_map(pv({0, 2, 0})).coords, vec({0, 2, 0})) <= 1e-14);
  CHECK(std::isfinite(l15.inverse_duality_map(dv({0, -3, 0})).coords.sum()));
}

TEST_CASE("inverse duality map closed forms") {
  Space l2(SpaceSpec::lp(3, 2.0));
  CHECK(positive_ray_gap(l2.inverse_duality_map(dv({0, 1, 1})).coords, vec({0, 1, 1})) <=
        1e-14);

  for (double p : {1.5, 3.0, 4.0}) {
    Space lp(SpaceSpec::lp(3, p));
    const double q = p / (p - 1.0);
    const Eigen::VectorXd expected = vec({1, 1, std::pow(2.0, q - 1.0)});
    CHECK(positive_ray_gap(lp.inverse_duality_map(dv({1, 1, 2})).coords, expected) <=
          1e-12);
  }

  Eigen::MatrixXd A = vec({2, 1}).asDiagonal();
  Space quad(SpaceSpec::quadratic(A));
  CHECK(rel_gap(quad.inverse_duality_map(dv({2, 3})).coords, vec({1, 3})) <= 1e-14);
}

TEST_CASE("definition identities, round trips, homogeneity") {
  GaussianSampler rng(2024);
  for (const Space& space : test_util::space_matrix()) {
    CAPTURE(space.is_lp());
    for (int i = 0; i < 1000; ++i) {
      const PrimalVec x{rng.vector(space.dim())};
      const double nx = space.norm(x);
      const DualVec jx = space.duality_map(x);

      CHECK(std::abs(pairing(jx, x) - nx * nx) <= 1e-10 * std::max(1.0, nx * nx));
      CHECK(std::abs(space.dual_norm(jx) - nx) <= 1e-10 * std::max(1.0, nx));

      const PrimalVec back = space.inverse_duality_map(jx);
      CHECK((back.coords - x.coords).norm() <= 1e-8 * std::max(1.0, nx));

      const DualVec a{rng.vector(space.dim())};
      const DualVec fwd = space.duality_map(space.inverse_duality_map(a));
      CHECK((fwd.coords - a.coords).norm() <= 1e-8 * std::max(1.0, space.dual_norm(a)));

      if (i < 100) {
        for (double t : {0.5, 2.0, 10.0}) {
          const DualVec jt = space.duality_map(PrimalVec{t * x.coords});
          CHECK(space.dual_norm(DualVec{jt.coords - t * jx.coords}) <= 1e-10 * t * nx);
        }
      }
    }
  }
}

TEST_CASE("Hilbert degeneration: J is the identity") {
  GaussianSampler rng(7);
  Space l2(SpaceSpec::lp(5, 2.0));
  Space quad(SpaceSpec::quadratic(Eigen::MatrixXd::Identity(5, 5)));
  for (int i = 0; i < 100; ++i) {
    const PrimalVec x{rng.vector(5)};
    CHECK(rel_gap(l2.duality_map(x).coords, x.coords) <= 1e-14);
    CHECK(rel_gap(quad.duality_map(x).coords, x.coords) <= 1e-12);
  }
}

// The unit-sphere-normalized form (1/||a||_q)(|a_i|^{q-2} a_i) and the
// degree-1 homogeneous J* used here agree up to a positive scalar; ray
// directions are what downstream geometry consumes.
TEST_CASE("sphere-normalized inverse map matches in direction") {
  GaussianSampler rng(11);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    Space lp(SpaceSpec::lp(3, p));
    const double q = p / (p - 1.0);
    for (int i = 0; i < 50; ++i) {
      const DualVec a{rng.vector(3)};
      const double na = lp.dual_norm(a);
      Eigen::VectorXd sphere_form(3);
      for (int k = 0; k < 3; ++k) {
        const double v = a.coords[k];
        sphere_form[k] = v == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v), q - 1.0), v);
      }
      sphere_form /= na;
      CHECK(positive_ray_gap(lp.inverse_duality_map(a).coords, sphere_form) <= 1e-10);
    }
  }
}

TEST_CASE("dimension mismatches are rejected") {
  Space l2(SpaceSpec::lp(3, 2.0));
  CHECK_THROWS_AS(l2.norm(pv({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(l2.dual_norm(dv({1, 2, 3, 4})), std::invalid_argument);
  CHECK_THROWS_AS(l2.duality_map(pv({1})), std::invalid_argument);
  CHECK_THROWS_AS(l2.inverse_duality_map(dv({1, 2})), std::invalid_argument);
}
