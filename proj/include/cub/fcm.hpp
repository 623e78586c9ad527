#ifndef CUB_FCM_HPP
#define CUB_FCM_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cub/error.hpp"

namespace cub {

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

template <typename Scalar>
using MembershipMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kClusterCount = 3;

/// Sector seeds in the (D, d) plane: low/low, high/low, high/high. The
/// low-D/high-d sector is left without a center.
template <typename Scalar = double>
PointMatrix<Scalar> seed_centers() {
  PointMatrix<Scalar> c(kClusterCount, 2);
  c << Scalar(0.2), Scalar(0.2),
       Scalar(0.8), Scalar(0.2),
       Scalar(0.8), Scalar(0.8);
  return c;
}

enum class FcmMode { FixedCenters, SeededIteration };

template <typename Scalar = double>
struct ClusterModel {
  PointMatrix<Scalar> centers = seed_centers<Scalar>();
  Scalar fuzzifier = Scalar(2);
  Scalar tolerance = Scalar(1e-6);
  int max_iterations = 300;
  FcmMode mode = FcmMode::SeededIteration;
};

namespace detail {

template <typename Scalar>
void check_distinct_centers(const PointMatrix<Scalar>& centers) {
  for (Eigen::Index a = 0; a < centers.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < centers.rows(); ++b) {
      if ((centers.row(a) - centers.row(b)).squaredNorm() == Scalar(0)) {
        throw Error(ErrorCode::DegenerateCenters,
                    "cluster centers " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                        " coincide");
      }
    }
  }
}

/// Membership update. A point sitting exactly on one or more centers gets
/// crisp membership split evenly over those centers.
template <typename Scalar>
MembershipMatrix<Scalar> membership_update(const PointMatrix<Scalar>& points,
                                           const PointMatrix<Scalar>& centers, Scalar m) {
  const Eigen::Index n = points.rows();
  const Eigen::Index c = centers.rows();
  const Scalar exponent = Scalar(2) / (m - Scalar(1));
  MembershipMatrix<Scalar> u(n, c);
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dist(c);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) dist(j) = (points.row(i) - centers.row(j)).norm();
    const Eigen::Index zeros = (dist.array() == Scalar(0)).count();
    if (zeros > 0) {
      for (Eigen::Index j = 0; j < c; ++j) {
        u(i, j) = dist(j) == Scalar(0) ? Scalar(1) / Scalar(zeros) : Scalar(0);
      }
      continue;
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      Scalar denom(0);
      for (Eigen::Index k = 0; k < c; ++k) denom += std::pow(dist(j) / dist(k), exponent);
      u(i, j) = Scalar(1) / denom;
    }
  }
  return u;
}

}  // namespace detail

/// u_ij = 1 / sum_k (|x_i - c_j| / |x_i - c_k|)^(2 / (m - 1)).
template <typename Scalar>
MembershipMatrix<Scalar> memberships(const PointMatrix<Scalar>& points,
                                     const PointMatrix<Scalar>& centers, Scalar m) {
  if (!(m > Scalar(1))) throw Error(ErrorCode::InvalidSize, "fuzzifier m must exceed 1");
  detail::check_distinct_centers(centers);
  return detail::membership_update(points, centers, m);
}

/// J_m = sum_i sum_j u_ij^m |x_i - c_j|^2.
template <typename Scalar>
Scalar fcm_objective(const PointMatrix<Scalar>& points, const PointMatrix<Scalar>& centers,
                     const MembershipMatrix<Scalar>& u, Scalar m) {
  Scalar total(0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      total += std::pow(u(i, j), m) * (points.row(i) - centers.row(j)).squaredNorm();
    }
  }
  return total;
}

template <typename Scalar>
struct FcmResult {
  PointMatrix<Scalar> centers;
  MembershipMatrix<Scalar> memberships;
  int iterations = 0;
  bool converged = true;
  std::vector<Scalar> objective_history;
};

template <typename Scalar>
FcmResult<Scalar> fcm_fit(const PointMatrix<Scalar>& points, const ClusterModel<Scalar>& model) {
  if (!(model.fuzzifier > Scalar(1))) throw Error(ErrorCode::InvalidSize, "fuzzifier m must exceed 1");
  if (!(model.tolerance > Scalar(0)) || model.max_iterations <= 0) {
    throw Error(ErrorCode::InvalidSize, "FCM tolerance and max_iterations must be positive");
  }
  const Scalar m = model.fuzzifier;
  FcmResult<Scalar> result;
  result.centers = model.centers;
  result.memberships = memberships(points, model.centers, m);
  result.objective_history.push_back(fcm_objective(points, result.centers, result.memberships, m));
  if (model.mode == FcmMode::FixedCenters || points.rows() == 0) return result;

  result.converged = false;
  for (int it = 1; it <= model.max_iterations; ++it) {
    const MembershipMatrix<Scalar> weights = result.memberships.array().pow(m).matrix();
    for (Eigen::Index j = 0; j < result.centers.rows(); ++j) {
      const Scalar mass = weights.col(j).sum();
      // A cluster with no weight keeps its previous center.
      if (mass > Scalar(0)) result.centers.row(j) = (weights.col(j).transpose() * points) / mass;
    }
    MembershipMatrix<Scalar> next = detail::membership_update(points, result.centers, m);
    const Scalar change = (next - result.memberships).cwiseAbs().maxCoeff();
    result.memberships = std::move(next);
    result.iterations = it;
    result.objective_history.push_back(fcm_objective(points, result.centers, result.memberships, m));
    if (change < model.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

struct ClusterAssignment {
  std::string student_id;
  Eigen::Vector3d memberships;
  int primary;  // 1-based
};

/// Argmax per row, ties toward the lowest cluster index.
std::vector<ClusterAssignment> assign_clusters(const MembershipMatrix<double>& u,
                                               const std::vector<std::string>& student_ids);

}  // namespace cub

#endif  // CUB_FCM_HPP
