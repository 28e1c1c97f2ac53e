#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adfcm/dataset.hpp"
#include "adfcm/fcm.hpp"
#include "adfcm/matrix.hpp"

namespace adfcm {

/// c x c prior matrix. Column k depends only on cluster k's average membership
/// a[k]: the diagonal entry is a[k], every off-diagonal entry is 1 - a[k].
struct PMatrix {
  Matrix p;
  std::vector<double> cluster_avgs;

  std::size_t clusters() const noexcept { return cluster_avgs.size(); }
  double operator()(std::size_t dominant, std::size_t k) const noexcept { return p(dominant, k); }
};

class CertaintyThreshold {
 public:
  /// Throws InvalidArgument unless 0 <= value <= 1.
  explicit CertaintyThreshold(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

enum class RecordStatus { Assigned, Ambiguous };

struct RecordOutcome {
  std::size_t record_index = 0;
  std::size_t dominant_cluster = 0;
  double certainty = 0.0;
  RecordStatus status = RecordStatus::Assigned;

  bool ambiguous() const noexcept { return status == RecordStatus::Ambiguous; }
};

struct OutcomeSet {
  double threshold = 0.0;
  std::size_t clusters = 0;
  std::vector<RecordOutcome> records;

  std::size_t size() const noexcept { return records.size(); }
  std::size_t ambiguous_count() const noexcept;
};

PMatrix compute_p_matrix(const MembershipMatrix& u);

/// Score S_k is u_k for the dominant cluster C' and 1 - u_k elsewhere; the
/// certainty is (1/c) * sum_k S_k * p[C'][k].
double certainty_factor(std::span<const double> column, const PMatrix& p);

/// Certainty of every record (column) of `u`.
std::vector<double> certainty_factors(const MembershipMatrix& u, const PMatrix& p);

/// Records with certainty strictly below the threshold become Ambiguous; the
/// rest keep their argmax cluster.
OutcomeSet classify(const MembershipMatrix& u, const PMatrix& p, CertaintyThreshold threshold);

/// Hand-off of the ambiguous records for a second-stage method.
struct AmbiguousRecords {
  Dataset records;
  std::vector<std::size_t> indices;
  std::vector<double> certainty;
};

AmbiguousRecords export_ambiguous(const OutcomeSet& outcomes, const Dataset& dataset);

}  // namespace adfcm
