#include "cub/fcm.hpp"

#include <numeric>
#include <random>

#include <gtest/gtest.h>

namespace cub {
namespace {

PointMatrix<double> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointMatrix<double> p(n, 2);
  for (int i = 0; i < n; ++i) p.row(i) << u(rng), u(rng);
  return p;
}

TEST(SeedCenters, SectorLayout) {
  const auto c = seed_centers();
  EXPECT_EQ(c.row(0), Eigen::RowVector2d(0.2, 0.2));
  EXPECT_EQ(c.row(1), Eigen::RowVector2d(0.8, 0.2));
  EXPECT_EQ(c.row(2), Eigen::RowVector2d(0.8, 0.8));
  EXPECT_LT(c(0, 0), c(1, 0));
  EXPECT_EQ(c(1, 0), c(2, 0));
  for (int j = 0; j < 3; ++j) EXPECT_FALSE(c(j, 0) < 0.5 && c(j, 1) > 0.5);
}

TEST(Memberships, ZeroDistanceIsCrisp) {
  PointMatrix<double> p(1, 2);
  p << 0.8, 0.2;
  const auto u = memberships(p, seed_centers(), 2.0);
  EXPECT_EQ(u.row(0), Eigen::RowVector3d(0.0, 1.0, 0.0));
}

TEST(Memberships, EquidistantIsUniform) {
  PointMatrix<double> p(1, 2);
  p << 0.5, 0.5;
  const auto u = memberships(p, seed_centers(), 2.0);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(u(0, j), 1.0 / 3.0, 1e-12);
}

TEST(Memberships, DistanceOneTwoTwo) {
  PointMatrix<double> p(1, 2);
  p << 0.5, 0.5;
  PointMatrix<double> c(3, 2);
  c << 0.6, 0.5,
       0.3, 0.5,
       0.5, 0.7;
  const auto u = memberships(p, c, 2.0);
  EXPECT_NEAR(u(0, 0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(u(0, 1), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(u(0, 2), 1.0 / 6.0, 1e-12);
}

TEST(Memberships, DegenerateCenters) {
  PointMatrix<double> c(3, 2);
  c << 0.2, 0.2,
       0.2, 0.2,
       0.8, 0.8;
  try {
    memberships(PointMatrix<double>(0, 2), c, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateCenters);
  }
  EXPECT_THROW(memberships(PointMatrix<double>(0, 2), seed_centers(), 1.0), Error);
}

TEST(Memberships, RowsNormalizedAndPermutationInvariant) {
  std::mt19937_64 rng(3);
  const auto p = random_points(rng, 40);
  for (double m : {1.5, 2.0, 3.0}) {
    const auto u = memberships(p, seed_centers(), m);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      EXPECT_NEAR(u.row(i).sum(), 1.0, 1e-9);
      EXPECT_GE(u.row(i).minCoeff(), 0.0);
      EXPECT_LE(u.row(i).maxCoeff(), 1.0);
    }
    std::vector<int> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    PointMatrix<double> q(40, 2);
    for (int i = 0; i < 40; ++i) q.row(i) = p.row(perm[i]);
    const auto v = memberships(q, seed_centers(), m);
    for (int i = 0; i < 40; ++i) EXPECT_EQ(v.row(i), u.row(perm[i]));
  }
}

TEST(FcmFit, SeedsAreAFixedPoint) {
  const PointMatrix<double> p = seed_centers();
  const auto r = fcm_fit(p, ClusterModel<double>{});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_TRUE(r.centers.isApprox(seed_centers(), 1e-6));
}

TEST(FcmFit, FixedCentersReturnedVerbatim) {
  PointMatrix<double> p(1, 2);
  p << 0.31, 0.77;
  ClusterModel<double> model;
  model.mode = FcmMode::FixedCenters;
  const auto r = fcm_fit(p, model);
  EXPECT_EQ(r.centers, seed_centers());
  EXPECT_EQ(r.iterations, 0);
  EXPECT_NEAR(r.memberships.row(0).sum(), 1.0, 1e-12);
}

TEST(FcmFit, SinglePointSeededIteration) {
  PointMatrix<double> p(1, 2);
  p << 0.31, 0.77;
  const auto r = fcm_fit(p, ClusterModel<double>{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.memberships.row(0).sum(), 1.0, 1e-12);
}

TEST(FcmFit, ObjectiveNonIncreasing) {
  std::mt19937_64 rng(11);
  for (int roster = 0; roster < 100; ++roster) {
    const auto p = random_points(rng, 30);
    const auto r = fcm_fit(p, ClusterModel<double>{});
    for (std::size_t t = 1; t < r.objective_history.size(); ++t) {
      EXPECT_LE(r.objective_history[t], r.objective_history[t - 1] + 1e-12);
    }
    for (Eigen::Index i = 0; i < r.memberships.rows(); ++i) {
      EXPECT_NEAR(r.memberships.row(i).sum(), 1.0, 1e-9);
    }
  }
}

TEST(FcmFit, NonConvergenceIsFlaggedNotFatal) {
  std::mt19937_64 rng(2);
  const auto p = random_points(rng, 30);
  ClusterModel<double> model;
  model.max_iterations = 1;
  model.tolerance = 1e-15;
  const auto r = fcm_fit(p, model);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(FcmFit, RecoversSeparatedBlobs) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.05);
  const auto seeds = seed_centers();
  int correct = 0;
  int total = 0;
  for (int roster = 0; roster < 20; ++roster) {
    const int n = 60;
    PointMatrix<double> p(n, 2);
    std::vector<int> truth(n);
    for (int i = 0; i < n; ++i) {
      truth[i] = i % 3;
      p.row(i) = seeds.row(truth[i]) + Eigen::RowVector2d(noise(rng), noise(rng));
    }
    const auto r = fcm_fit(p, ClusterModel<double>{});
    std::vector<std::string> ids(n, "x");
    const auto a = assign_clusters(r.memberships, ids);
    for (int i = 0; i < n; ++i) correct += (a[i].primary - 1 == truth[i]);
    total += n;
  }
  EXPECT_GE(static_cast<double>(correct) / total, 0.95);
}

TEST(FcmFit, FloatScalar) {
  PointMatrix<float> p(2, 2);
  p << 0.1f, 0.1f, 0.9f, 0.9f;
  const auto r = fcm_fit(p, ClusterModel<float>{});
  EXPECT_NEAR(r.memberships.row(0).sum(), 1.0f, 1e-5f);
}

TEST(AssignClusters, ArgmaxLowestIndexOnTies) {
  MembershipMatrix<double> u(3, 3);
  u << 0.7, 0.2, 0.1,
       0.5, 0.5, 0.0,
       0.1, 0.1, 0.8;
  const auto a = assign_clusters(u, {"a", "b", "c"});
  EXPECT_EQ(a[0].primary, 1);
  EXPECT_EQ(a[1].primary, 1);
  EXPECT_EQ(a[2].primary, 3);
  EXPECT_EQ(a[2].student_id, "c");
  EXPECT_THROW(assign_clusters(u, {"a"}), Error);
}

}  // namespace
}  // namespace cub
