#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adfcm/dataset.hpp"
#include "adfcm/matrix.hpp"

namespace adfcm {

struct FcmConfig {
  std::size_t clusters = 2;
  double fuzzifier = 2.0;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  // Worker threads for the membership/centroid passes. Results do not depend on it.
  std::size_t threads = 1;

  void validate(std::size_t n_records) const;
};

/// c x N matrix of memberships; column k holds record k's degrees, summing to 1.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  /// Validates entries in [0, 1] and column sums within `tol` of 1.
  explicit MembershipMatrix(Matrix u, double tol = 1e-9);

  /// Builds from N rows of c memberships (record-major), validating as above.
  static MembershipMatrix from_records(const Matrix& per_record, double tol = 1e-9);

  std::size_t clusters() const noexcept { return u_.rows(); }
  std::size_t records() const noexcept { return u_.cols(); }
  double operator()(std::size_t cluster, std::size_t record) const noexcept {
    return u_(cluster, record);
  }
  std::vector<double> column(std::size_t record) const;
  const Matrix& matrix() const noexcept { return u_; }

 private:
  struct Unchecked {};
  MembershipMatrix(Matrix u, Unchecked) : u_(std::move(u)) {}
  friend MembershipMatrix update_memberships(const Dataset&, const Matrix&, double, std::size_t);

  Matrix u_;
};

struct FcmModel {
  Matrix centroids;
  MembershipMatrix memberships;
  std::vector<double> objective_trace;
  std::size_t iterations_run = 0;
  bool converged = false;
  double fuzzifier = 2.0;
};

/// Greedy farthest-point seeding. The first centroid is the record at a seeded
/// random index; each next one is the record farthest (min squared distance)
/// from the chosen set, lowest index on ties.
Matrix init_centroids(const Dataset& dataset, std::size_t clusters, std::uint64_t seed);

MembershipMatrix update_memberships(const Dataset& dataset, const Matrix& centroids,
                                    double fuzzifier, std::size_t threads = 1);

Matrix update_centroids(const Dataset& dataset, const MembershipMatrix& u, double fuzzifier,
                        std::size_t threads = 1);

/// Q = sum_i sum_k u_ik^m ||x_k - v_i||^2
double objective(const Dataset& dataset, const MembershipMatrix& u, const Matrix& centroids,
                 double fuzzifier);

FcmModel run_fcm(const Dataset& dataset, const FcmConfig& config);

/// Same iteration, starting from the given centroids instead of seeding.
FcmModel run_fcm(const Dataset& dataset, const FcmConfig& config, Matrix initial_centroids);

/// Argmax of a membership column, lowest index on ties.
std::size_t dominant_cluster(std::span<const double> column) noexcept;

}  // namespace adfcm
