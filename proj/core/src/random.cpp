#include "polarcone/random.hpp"

namespace polarcone {

Eigen::MatrixXd random_spd_matrix(int n, std::uint64_t seed) {
  GaussianSampler rng(seed);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = rng.normal();
  }
  // M^T M / n + I/2 keeps eigenvalues in roughly [0.5, 5]: SPD and well
  // conditioned for any seed.
  Eigen::MatrixXd A = M.transpose() * M / n + 0.5 * Eigen::MatrixXd::Identity(n, n);
  return 0.5 * (A + A.transpose());
}

}  // namespace polarcone
