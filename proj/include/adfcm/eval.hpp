#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adfcm/ambiguity.hpp"
#include "adfcm/dataset.hpp"
#include "adfcm/fcm.hpp"
#include "adfcm/matrix.hpp"

namespace adfcm {

struct ClusterLabelMap {
  std::vector<std::string> label_of_cluster;

  const std::string& operator[](std::size_t cluster) const { return label_of_cluster.at(cluster); }
};

/// Majority label of each cluster's assigned records. Ties go to the globally
/// more frequent class, then the lexicographically smaller one. A cluster with
/// no assigned record maps to the global majority class.
ClusterLabelMap map_clusters_to_labels(const OutcomeSet& outcomes,
                                       std::span<const std::string> labels);

/// 100 * T / (T + F); NoDecidedRecords when T + F = 0.
double accuracy(std::size_t n_true, std::size_t n_false);

struct SweepRow {
  double threshold = 0.0;
  std::size_t n = 0;
  std::size_t nar = 0;   ///< ambiguous records
  std::size_t ntr = 0;   ///< decided and correctly labelled
  std::size_t nfr = 0;   ///< decided and wrongly labelled
  std::size_t nfra = 0;  ///< ambiguous and wrongly labelled by plain argmax
  double par = 0.0;      ///< 100 * NAR / N
  double pbfra = 0.0;    ///< 100 * NFRA / NAR, 0 when NAR = 0
  std::optional<double> accuracy;  ///< empty when every record is ambiguous
};

/// One row per threshold from a single fitted model. P and the memberships are
/// fixed, and the cluster-to-label map comes from plain argmax (threshold 0),
/// so only the threshold varies between rows. Thresholds must be ascending.
std::vector<SweepRow> sweep(const FcmModel& model, std::span<const std::string> labels,
                            std::span<const double> thresholds);

/// Same sweep for memberships obtained elsewhere.
std::vector<SweepRow> sweep(const MembershipMatrix& u, std::span<const std::string> labels,
                            std::span<const double> thresholds);

struct GMean {
  double value = 0.0;
  std::vector<std::string> excluded_classes;  ///< classes with no decided member

  bool flagged() const noexcept { return !excluded_classes.empty(); }
};

/// Geometric mean of per-class recall over decided records.
GMean g_mean(const OutcomeSet& outcomes, std::span<const std::string> labels,
             const ClusterLabelMap& map);

/// Appends floor(fraction * N) uniform records inside `bounds` (one range per
/// feature), flagged synthetic. Labelled datasets label them "noise".
Dataset add_noise_queries(const Dataset& dataset, double fraction,
                          std::span<const FeatureRange> bounds, std::uint64_t seed);

/// Minimum-cost matching between two center sets, summing Euclidean distances.
double center_error(const Matrix& true_centers, const Matrix& estimated_centers);

/// Optimal assignment for a square cost matrix; result[i] is the column for row i.
std::vector<std::size_t> min_cost_assignment(const Matrix& cost);

struct PrivacyRow {
  double threshold = 0.0;
  double error = 0.0;
  std::size_t n_ambiguous = 0;
  /// Too few decided records to re-fit; `error` then repeats the plain-FCM error.
  bool flagged = false;
};

struct PrivacyReport {
  Matrix reference_centers;  ///< FCM centers fitted on the clean data
  Matrix plain_centers;
  double plain_error = 0.0;
  std::size_t noise_records = 0;
  std::vector<PrivacyRow> rows;
};

/// Fits FCM on clean data for reference centers, appends uniform noise, then
/// compares plain FCM on the noised data with AD-FCM, which re-fits the
/// centers on the records decided at each threshold.
PrivacyReport privacy_experiment(const Dataset& clean, double noise_fraction,
                                 const FcmConfig& config, std::span<const double> thresholds,
                                 std::uint64_t noise_seed);

struct ErrorStats {
  double mean = 0.0;
  double variance = 0.0;  ///< sample variance, 0 for a single run
};

ErrorStats error_stats(std::span<const double> errors);

}  // namespace adfcm
