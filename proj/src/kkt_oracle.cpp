#include "convexlse/kkt_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace convexlse {

std::vector<double> kkt_oracle(std::span<const double> y, std::span<const ConeSpec> cones) {
  const int len = static_cast<int>(y.size());
  if (len > 12) {
    throw std::invalid_argument("kkt_oracle: ambient dimension too large (cap is 12)");
  }

  std::set<int> pooled;
  for (const auto& cone : cones) {
    if (cone.lo < 0 || cone.hi < cone.lo || cone.hi >= len) {
      throw std::invalid_argument("kkt_oracle: cone outside grid");
    }
    for (int k = cone.lo + 1; k <= cone.hi - 1; ++k) pooled.insert(k);
  }
  const std::vector<int> rows(pooled.begin(), pooled.end());
  const int m = static_cast<int>(rows.size());

  Eigen::VectorXd yv(len);
  for (int i = 0; i < len; ++i) yv(i) = y[static_cast<std::size_t>(i)];

  Eigen::MatrixXd constraint = Eigen::MatrixXd::Zero(m, len);
  for (int r = 0; r < m; ++r) {
    const int k = rows[static_cast<std::size_t>(r)];
    constraint(r, k - 1) = 1.0;
    constraint(r, k) = -2.0;
    constraint(r, k + 1) = 1.0;
  }

  const double tol = 1e-9;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> subset;
    for (int r = 0; r < m; ++r) {
      if (mask & (1u << r)) subset.push_back(r);
    }

    Eigen::VectorXd g = yv;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(static_cast<int>(subset.size()));
    if (!subset.empty()) {
      const int s = static_cast<int>(subset.size());
      Eigen::MatrixXd a(s, len);
      for (int r = 0; r < s; ++r) a.row(r) = constraint.row(subset[static_cast<std::size_t>(r)]);
      const Eigen::MatrixXd gram = a * a.transpose();
      const Eigen::VectorXd mu = gram.ldlt().solve(a * yv);
      g = yv - a.transpose() * mu;
      lambda = -mu;
    }

    if ((lambda.size() > 0 && lambda.minCoeff() < -tol)) continue;
    const Eigen::VectorXd slack = constraint * g;
    if (m > 0 && slack.minCoeff() < -tol) continue;
    return std::vector<double>(g.data(), g.data() + len);
  }
  throw std::runtime_error("kkt_oracle: no subset satisfied the KKT conditions");
}

}  // namespace convexlse
