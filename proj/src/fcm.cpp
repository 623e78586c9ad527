#include "cub/fcm.hpp"

namespace cub {

std::vector<ClusterAssignment> assign_clusters(const MembershipMatrix<double>& u,
                                               const std::vector<std::string>& student_ids) {
  if (u.cols() != kClusterCount || static_cast<std::size_t>(u.rows()) != student_ids.size()) {
    throw Error(ErrorCode::MismatchedRosters, "membership matrix shape does not match the roster");
  }
  std::vector<ClusterAssignment> out;
  out.reserve(student_ids.size());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < u.cols(); ++j) {
      if (u(i, j) > u(i, best)) best = j;
    }
    out.push_back({student_ids[static_cast<std::size_t>(i)], u.row(i).transpose(),
                   static_cast<int>(best) + 1});
  }
  return out;
}

}  // namespace cub
