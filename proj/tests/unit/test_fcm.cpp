#include <algorithm>
#include <cmath>
#include <random>

#include "adfcm/error.hpp"
#include "adfcm/fcm.hpp"
#include "adfcm/ingest.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adfcm;
using adfcm::testing::points_1d;

namespace {

// Objective minimized over memberships for fixed centroids, derived
// independently of the update rule: for each record the optimum of
// sum_i u_i^m d_i subject to sum_i u_i = 1 is (sum_i d_i^(-1/(m-1)))^-(m-1).
double reduced_objective(const Dataset& ds, const Matrix& v, double m) {
  double q = 0.0;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
      s += std::pow(squared_distance(ds.records.row(k), v.row(i)), -1.0 / (m - 1.0));
    }
    q += std::pow(s, -(m - 1.0));
  }
  return q;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected adfcm::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("init_centroids") {
  TEST_CASE("two distinct points are both chosen") {
    const Dataset ds = points_1d({0.0, 10.0, 10.0, 0.0});
    for (std::uint64_t seed : {0u, 1u, 2u, 99u}) {
      const Matrix v = init_centroids(ds, 2, seed);
      std::vector<double> got{v(0, 0), v(1, 0)};
      std::sort(got.begin(), got.end());
      CHECK(got == std::vector<double>{0.0, 10.0});
    }
  }

  TEST_CASE("repeated record with one cluster") {
    const Dataset ds = points_1d({3.5, 3.5, 3.5, 3.5});
    const Matrix v = init_centroids(ds, 1, 7);
    CHECK(v(0, 0) == 3.5);
  }

  TEST_CASE("deterministic on Pima") {
    const Dataset ds = load_csv(adfcm::testing::data_path("pima.csv"), {true, "class", ','}, true);
    CHECK(init_centroids(ds, 2, 1) == init_centroids(ds, 2, 1));
  }

  TEST_CASE("errors") {
    const Dataset ds = points_1d({1.0, 1.0, 2.0});
    CHECK(code_of([&] { init_centroids(ds, 4, 0); }) == ErrorCode::InvalidClusterCount);
    CHECK(code_of([&] { init_centroids(ds, 0, 0); }) == ErrorCode::InvalidClusterCount);
    CHECK(code_of([&] { init_centroids(ds, 3, 0); }) == ErrorCode::DegenerateData);
    CHECK_NOTHROW(init_centroids(ds, 2, 0));
  }
}

TEST_SUITE("update_memberships") {
  TEST_CASE("record on a centroid is crisp") {
    const Dataset ds = points_1d({2.0});
    const auto u = update_memberships(ds, Matrix{{2.0}, {5.0}}, 2.0);
    CHECK(u(0, 0) == 1.0);
    CHECK(u(1, 0) == 0.0);
  }

  TEST_CASE("equidistant record splits evenly") {
    const Dataset ds = points_1d({1.0});
    const auto u = update_memberships(ds, Matrix{{0.0}, {2.0}}, 2.0);
    CHECK(u(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("coincident centroids share a zero-distance record") {
    const Dataset ds = points_1d({4.0});
    const auto u = update_memberships(ds, Matrix{{4.0}, {4.0}, {9.0}}, 2.0);
    CHECK(u(0, 0) == 0.5);
    CHECK(u(1, 0) == 0.5);
    CHECK(u(2, 0) == 0.0);
  }

  TEST_CASE("hand-evaluated update") {
    // d^2 = {1, 4}: u1 = 1 / (1 + 1/4) = 0.8
    const Dataset ds = points_1d({1.0});
    const auto u = update_memberships(ds, Matrix{{0.0}, {3.0}}, 2.0);
    CHECK(u(0, 0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(u(1, 0) == doctest::Approx(0.2).epsilon(1e-14));
  }

  TEST_CASE("shape and fuzzifier checks") {
    const Dataset ds = points_1d({1.0});
    CHECK(code_of([&] { update_memberships(ds, Matrix{{0.0, 1.0}}, 2.0); }) ==
          ErrorCode::ShapeMismatch);
    CHECK(code_of([&] { update_memberships(ds, Matrix{{0.0}}, 1.0); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("near-hard assignment as m approaches 1") {
    std::mt19937_64 rng(5);
    const Dataset ds = adfcm::testing::random_dataset(rng, 40, 2);
    const Matrix v{{-3.0, -3.0}, {3.0, 3.0}};
    const auto u = update_memberships(ds, v, 1.05);
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const double d0 = squared_distance(ds.records.row(k), v.row(0));
      const double d1 = squared_distance(ds.records.row(k), v.row(1));
      // "far closer" = squared-distance ratio of at least 2
      if (std::max(d0, d1) >= 2.0 * std::min(d0, d1)) {
        CHECK(std::max(u(0, k), u(1, k)) > 0.99);
      }
    }
  }
}

TEST_SUITE("update_centroids") {
  TEST_CASE("single cluster gives the mean") {
    const Dataset ds = points_1d({1.0, 2.0, 6.0});
    const MembershipMatrix u(Matrix{{1.0, 1.0, 1.0}});
    CHECK(update_centroids(ds, u, 2.0)(0, 0) == doctest::Approx(3.0));
  }

  TEST_CASE("crisp memberships") {
    const Dataset ds = points_1d({0.0, 2.0});
    const MembershipMatrix u(Matrix{{1.0, 0.0}, {0.0, 1.0}});
    const Matrix v = update_centroids(ds, u, 2.0);
    CHECK(v(0, 0) == 0.0);
    CHECK(v(1, 0) == 2.0);
  }

  TEST_CASE("weighted mean arithmetic") {
    // (0.64 * 0 + 0.04 * 1) / (0.64 + 0.04)
    const Dataset ds = points_1d({0.0, 1.0});
    const MembershipMatrix u(Matrix{{0.8, 0.2}, {0.2, 0.8}});
    CHECK(update_centroids(ds, u, 2.0)(0, 0) == doctest::Approx(0.04 / 0.68).epsilon(1e-14));
  }

  TEST_CASE("zero-weight cluster") {
    const Dataset ds = points_1d({0.0, 1.0});
    const MembershipMatrix u(Matrix{{1.0, 1.0}, {0.0, 0.0}});
    CHECK(code_of([&] { update_centroids(ds, u, 2.0); }) == ErrorCode::EmptyCluster);
  }
}

TEST_SUITE("objective") {
  TEST_CASE("examples") {
    const Dataset on = points_1d({0.0, 3.0});
    CHECK(objective(on, MembershipMatrix(Matrix{{1.0, 0.0}, {0.0, 1.0}}), Matrix{{0.0}, {3.0}},
                    2.0) == 0.0);
    const Dataset one = points_1d({1.0});
    CHECK(objective(one, MembershipMatrix(Matrix{{1.0}}), Matrix{{0.0}}, 2.0) == 1.0);
    CHECK(objective(one, MembershipMatrix(Matrix{{0.8}, {0.2}}), Matrix{{0.0}, {3.0}}, 2.0) ==
          doctest::Approx(0.8).epsilon(1e-14));
  }

  TEST_CASE("shape mismatch") {
    const Dataset one = points_1d({1.0});
    CHECK(code_of([&] {
            objective(one, MembershipMatrix(Matrix{{1.0}}), Matrix{{0.0}, {1.0}}, 2.0);
          }) == ErrorCode::ShapeMismatch);
  }
}

TEST_SUITE("run_fcm") {
  TEST_CASE("two separated blobs match a grid-search oracle") {
    const Dataset ds = points_1d({-0.05, 0.0, 0.03, 0.05, 9.96, 10.0, 10.02, 10.04});
    FcmConfig cfg;
    cfg.clusters = 2;
    const FcmModel model = run_fcm(ds, cfg);
    std::vector<double> fit{model.centroids(0, 0), model.centroids(1, 0)};
    std::sort(fit.begin(), fit.end());

    double best = INFINITY, best_a = 0.0, best_b = 0.0;
    for (double a = -1.0; a <= 11.0; a += 0.01) {
      for (double b = a + 0.01; b <= 11.0; b += 0.01) {
        const double q = reduced_objective(ds, Matrix{{a}, {b}}, 2.0);
        if (q < best) {
          best = q;
          best_a = a;
          best_b = b;
        }
      }
    }
    CHECK(std::abs(best_a - 0.0) < 0.1);
    CHECK(std::abs(best_b - 10.0) < 0.1);
    CHECK(std::abs(fit[0] - best_a) < 0.1);
    CHECK(std::abs(fit[1] - best_b) < 0.1);
    CHECK(reduced_objective(ds, model.centroids, 2.0) <= best + 1e-9);
  }

  TEST_CASE("single cluster converges to the mean") {
    const Dataset ds = points_1d({1.0, 2.0, 3.0, 10.0});
    FcmConfig cfg;
    cfg.clusters = 1;
    const FcmModel model = run_fcm(ds, cfg);
    CHECK(model.centroids(0, 0) == doctest::Approx(4.0));
    CHECK(model.converged);
    CHECK(model.iterations_run <= 2);
    for (std::size_t k = 0; k < ds.size(); ++k) CHECK(model.memberships(0, k) == 1.0);
  }

  TEST_CASE("objective trace never increases") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const Dataset ds = adfcm::testing::random_dataset(rng, 30, 3);
      FcmConfig cfg;
      cfg.clusters = 2 + trial % 3;
      cfg.seed = static_cast<std::uint64_t>(trial);
      cfg.tol = 1e-12;
      const FcmModel model = run_fcm(ds, cfg);
      for (std::size_t t = 1; t < model.objective_trace.size(); ++t) {
        const double prev = model.objective_trace[t - 1];
        CHECK(model.objective_trace[t] <= prev + 1e-7 * std::abs(prev));
      }
    }
  }

  TEST_CASE("bit-identical across runs and thread counts") {
    std::mt19937_64 rng(3);
    const Dataset ds = adfcm::testing::random_dataset(rng, 5000, 3);
    FcmConfig cfg;
    cfg.clusters = 4;
    cfg.seed = 17;
    cfg.max_iter = 40;
    const FcmModel a = run_fcm(ds, cfg);
    const FcmModel b = run_fcm(ds, cfg);
    cfg.threads = 4;
    const FcmModel c = run_fcm(ds, cfg);
    CHECK(a.centroids == b.centroids);
    CHECK(a.centroids == c.centroids);
    CHECK(a.memberships.matrix() == c.memberships.matrix());
    CHECK(a.objective_trace == c.objective_trace);
  }

  TEST_CASE("config validation") {
    const Dataset ds = points_1d({1.0, 2.0});
    FcmConfig cfg;
    cfg.clusters = 3;
    CHECK(code_of([&] { run_fcm(ds, cfg); }) == ErrorCode::InvalidClusterCount);
    cfg.clusters = 2;
    cfg.fuzzifier = 1.0;
    CHECK(code_of([&] { run_fcm(ds, cfg); }) == ErrorCode::InvalidArgument);
    cfg.fuzzifier = 2.0;
    cfg.max_iter = 0;
    CHECK(code_of([&] { run_fcm(ds, cfg); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("membership columns are valid and optimal for fixed centroids") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 19;
    const std::size_t dim = 1 + rng() % 3;
    const std::size_t c = 1 + rng() % std::min<std::size_t>(3, n);
    const Dataset ds = adfcm::testing::random_dataset(rng, n, dim);
    const Matrix v = init_centroids(ds, c, rng());
    const auto u = update_memberships(ds, v, 2.0);
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < c; ++i) {
        CHECK(u(i, k) >= 0.0);
        CHECK(u(i, k) <= 1.0);
        sum += u(i, k);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    const double q = objective(ds, u, v, 2.0);
    for (int r = 0; r < 500; ++r) {
      const auto random = adfcm::testing::random_memberships(rng, c, n, 1.0 + r % 4);
      CHECK(q <= objective(ds, random, v, 2.0) + 1e-12);
    }
  }
}

TEST_CASE("membership matrix validation") {
  CHECK(code_of([] { MembershipMatrix(Matrix{{0.5}, {0.6}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MembershipMatrix(Matrix{{1.2}, {-0.2}}); }) == ErrorCode::InvalidArgument);
  const auto u = MembershipMatrix::from_records(Matrix{{0.25, 0.75}, {1.0, 0.0}});
  CHECK(u.clusters() == 2);
  CHECK(u.records() == 2);
  CHECK(u(1, 0) == 0.75);
}
