#include "adfcm/ambiguity.hpp"

#include <algorithm>
#include <string>

#include "adfcm/error.hpp"

namespace adfcm {

CertaintyThreshold::CertaintyThreshold(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "certainty threshold must lie in [0, 1]");
  }
}

std::size_t OutcomeSet::ambiguous_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.ambiguous(); }));
}

PMatrix compute_p_matrix(const MembershipMatrix& u) {
  const std::size_t c = u.clusters();
  PMatrix out{Matrix(c, c), std::vector<double>(c, 0.0)};
  for (std::size_t k = 0; k < c; ++k) {
    double sum = 0.0;
    for (std::size_t r = 0; r < u.records(); ++r) sum += u(k, r);
    out.cluster_avgs[k] = sum / static_cast<double>(u.records());
  }
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      out.p(i, k) = i == k ? out.cluster_avgs[k] : 1.0 - out.cluster_avgs[k];
    }
  }
  return out;
}

double certainty_factor(std::span<const double> column, const PMatrix& p) {
  const std::size_t c = p.clusters();
  if (column.size() != c) {
    throw Error(ErrorCode::ShapeMismatch, "membership column length differs from P size");
  }
  const std::size_t dom = dominant_cluster(column);
  double sum = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const double score = k == dom ? column[k] : 1.0 - column[k];
    sum += score * p(dom, k);
  }
  return sum / static_cast<double>(c);
}

std::vector<double> certainty_factors(const MembershipMatrix& u, const PMatrix& p) {
  if (u.clusters() != p.clusters()) {
    throw Error(ErrorCode::ShapeMismatch, "P matrix built for a different cluster count");
  }
  std::vector<double> out(u.records());
  for (std::size_t r = 0; r < u.records(); ++r) out[r] = certainty_factor(u.column(r), p);
  return out;
}

OutcomeSet classify(const MembershipMatrix& u, const PMatrix& p, CertaintyThreshold threshold) {
  const std::vector<double> cf = certainty_factors(u, p);
  OutcomeSet out;
  out.threshold = threshold.value();
  out.clusters = u.clusters();
  out.records.reserve(u.records());
  for (std::size_t r = 0; r < u.records(); ++r) {
    const std::vector<double> col = u.column(r);
    out.records.push_back({r, dominant_cluster(col), cf[r],
                           cf[r] < threshold.value() ? RecordStatus::Ambiguous
                                                     : RecordStatus::Assigned});
  }
  return out;
}

AmbiguousRecords export_ambiguous(const OutcomeSet& outcomes, const Dataset& dataset) {
  if (outcomes.size() != dataset.size()) {
    throw Error(ErrorCode::ShapeMismatch, "outcomes were computed for a different dataset");
  }
  AmbiguousRecords out;
  for (const RecordOutcome& r : outcomes.records) {
    if (!r.ambiguous()) continue;
    out.indices.push_back(r.record_index);
    out.certainty.push_back(r.certainty);
  }
  out.records = subset(dataset, out.indices);
  return out;
}

}  // namespace adfcm
