#include "adfcm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "adfcm/error.hpp"
#include "adfcm/random.hpp"

namespace adfcm {

namespace {

void check_labels(std::span<const std::string> labels, std::size_t n) {
  if (labels.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "labels length differs from record count");
  }
}

std::map<std::string, std::size_t> frequencies(std::span<const std::string> labels) {
  std::map<std::string, std::size_t> out;
  for (const auto& l : labels) ++out[l];
  return out;
}

// Most frequent key; `tiebreak` ranks equal counts, lexicographic order last.
std::string majority(const std::map<std::string, std::size_t>& counts,
                     const std::map<std::string, std::size_t>& tiebreak) {
  const std::string* best = nullptr;
  for (const auto& [label, n] : counts) {
    if (best == nullptr) {
      best = &label;
      continue;
    }
    const std::size_t bn = counts.at(*best);
    if (n > bn || (n == bn && tiebreak.at(label) > tiebreak.at(*best))) best = &label;
  }
  return best == nullptr ? std::string{} : *best;
}

}  // namespace

ClusterLabelMap map_clusters_to_labels(const OutcomeSet& outcomes,
                                       std::span<const std::string> labels) {
  check_labels(labels, outcomes.size());
  const auto global = frequencies(labels);
  const std::string fallback = majority(global, global);

  std::vector<std::map<std::string, std::size_t>> per_cluster(outcomes.clusters);
  for (const RecordOutcome& r : outcomes.records) {
    if (!r.ambiguous()) ++per_cluster.at(r.dominant_cluster)[labels[r.record_index]];
  }
  ClusterLabelMap out;
  for (const auto& counts : per_cluster) {
    out.label_of_cluster.push_back(counts.empty() ? fallback : majority(counts, global));
  }
  return out;
}

double accuracy(std::size_t n_true, std::size_t n_false) {
  if (n_true + n_false == 0) {
    throw Error(ErrorCode::NoDecidedRecords, "accuracy undefined with no decided records");
  }
  return 100.0 * static_cast<double>(n_true) / static_cast<double>(n_true + n_false);
}

std::vector<SweepRow> sweep(const FcmModel& model, std::span<const std::string> labels,
                            std::span<const double> thresholds) {
  return sweep(model.memberships, labels, thresholds);
}

std::vector<SweepRow> sweep(const MembershipMatrix& u, std::span<const std::string> labels,
                            std::span<const double> thresholds) {
  const std::size_t n = u.records();
  check_labels(labels, n);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    CertaintyThreshold{thresholds[i]};
    if (i > 0 && thresholds[i] < thresholds[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "sweep thresholds must be ascending");
    }
  }
  const PMatrix p = compute_p_matrix(u);
  const OutcomeSet plain = classify(u, p, CertaintyThreshold{0.0});
  const ClusterLabelMap map = map_clusters_to_labels(plain, labels);

  std::vector<bool> wrong(n);
  for (std::size_t r = 0; r < n; ++r) wrong[r] = map[plain.records[r].dominant_cluster] != labels[r];

  std::vector<SweepRow> rows;
  for (double t : thresholds) {
    SweepRow row;
    row.threshold = t;
    row.n = n;
    for (std::size_t r = 0; r < n; ++r) {
      const bool ambiguous = plain.records[r].certainty < t;
      if (ambiguous) {
        ++row.nar;
        if (wrong[r]) ++row.nfra;
      } else if (wrong[r]) {
        ++row.nfr;
      } else {
        ++row.ntr;
      }
    }
    row.par = 100.0 * static_cast<double>(row.nar) / static_cast<double>(n);
    row.pbfra = row.nar == 0 ? 0.0
                             : 100.0 * static_cast<double>(row.nfra) / static_cast<double>(row.nar);
    if (row.ntr + row.nfr > 0) row.accuracy = accuracy(row.ntr, row.nfr);
    rows.push_back(row);
  }
  return rows;
}

GMean g_mean(const OutcomeSet& outcomes, std::span<const std::string> labels,
             const ClusterLabelMap& map) {
  check_labels(labels, outcomes.size());
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // decided, correct
  for (const auto& l : labels) tally.try_emplace(l, 0, 0);
  for (const RecordOutcome& r : outcomes.records) {
    if (r.ambiguous()) continue;
    auto& [decided, correct] = tally[labels[r.record_index]];
    ++decided;
    if (map[r.dominant_cluster] == labels[r.record_index]) ++correct;
  }
  GMean out;
  double product = 1.0;
  std::size_t classes = 0;
  for (const auto& [label, counts] : tally) {
    if (counts.first == 0) {
      out.excluded_classes.push_back(label);
      continue;
    }
    product *= static_cast<double>(counts.second) / static_cast<double>(counts.first);
    ++classes;
  }
  if (classes < 2) {
    throw Error(ErrorCode::DegenerateGMean, "G-mean needs at least two decided classes");
  }
  out.value = std::pow(product, 1.0 / static_cast<double>(classes));
  return out;
}

Dataset add_noise_queries(const Dataset& ds, double fraction,
                          std::span<const FeatureRange> bounds, std::uint64_t seed) {
  if (!(fraction >= 0.0) || !std::isfinite(fraction)) {
    throw Error(ErrorCode::InvalidArgument, "noise fraction must be finite and >= 0");
  }
  if (bounds.size() != ds.dimension()) {
    throw Error(ErrorCode::ShapeMismatch, "one noise range per feature required");
  }
  const auto extra =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(ds.size())));
  Dataset out = ds;
  if (extra == 0) return out;

  Matrix records(ds.size() + extra, ds.dimension());
  for (std::size_t k = 0; k < ds.size(); ++k) {
    std::copy(ds.records.row(k).begin(), ds.records.row(k).end(), records.row(k).begin());
  }
  std::mt19937_64 rng(seed);
  for (std::size_t k = ds.size(); k < records.rows(); ++k) {
    for (std::size_t j = 0; j < ds.dimension(); ++j) {
      records(k, j) = uniform(rng, bounds[j].min, bounds[j].max);
    }
  }
  out.records = std::move(records);
  out.synthetic.assign(ds.size(), false);
  for (std::size_t k = 0; k < ds.size(); ++k) out.synthetic[k] = ds.is_synthetic(k);
  out.synthetic.resize(out.size(), true);
  if (out.labels) out.labels->resize(out.size(), "noise");
  out.image.reset();
  return out;
}

std::vector<std::size_t> min_cost_assignment(const Matrix& cost) {
  // Hungarian method with row/column potentials, O(n^3).
  const std::size_t n = cost.rows();
  if (cost.cols() != n) throw Error(ErrorCode::ShapeMismatch, "assignment needs a square matrix");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t col = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col] = true;
      const std::size_t row = match[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(row - 1, j - 1) - row_pot[row] - col_pot[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (match[col] != 0);
    do {
      const std::size_t prev = way[col];
      match[col] = match[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<std::size_t> out(n);
  for (std::size_t j = 1; j <= n; ++j) out[match[j] - 1] = j - 1;
  return out;
}

double center_error(const Matrix& true_centers, const Matrix& estimated) {
  if (true_centers.rows() != estimated.rows() || true_centers.cols() != estimated.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "center sets differ in shape");
  }
  const std::size_t c = true_centers.rows();
  Matrix cost(c, c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      cost(i, j) = std::sqrt(squared_distance(true_centers.row(i), estimated.row(j)));
    }
  }
  const auto assignment = min_cost_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < c; ++i) total += cost(i, assignment[i]);
  return total;
}

PrivacyReport privacy_experiment(const Dataset& clean, double noise_fraction,
                                 const FcmConfig& config, std::span<const double> thresholds,
                                 std::uint64_t noise_seed) {
  clean.validate();
  for (double t : thresholds) CertaintyThreshold{t};

  PrivacyReport report;
  report.reference_centers = run_fcm(clean, config).centroids;
  const Dataset noised =
      add_noise_queries(clean, noise_fraction, feature_ranges(clean.records), noise_seed);
  report.noise_records = noised.size() - clean.size();

  const FcmModel plain = run_fcm(noised, config);
  report.plain_centers = plain.centroids;
  report.plain_error = center_error(report.reference_centers, plain.centroids);

  const std::vector<double> cf =
      certainty_factors(plain.memberships, compute_p_matrix(plain.memberships));
  for (double t : thresholds) {
    PrivacyRow row{t, report.plain_error, 0, false};
    std::vector<std::size_t> decided;
    for (std::size_t r = 0; r < cf.size(); ++r) {
      if (cf[r] >= t) decided.push_back(r);
    }
    row.n_ambiguous = cf.size() - decided.size();
    if (row.n_ambiguous > 0) {
      if (decided.size() < config.clusters) {
        row.flagged = true;
      } else {
        try {
          const FcmModel refit = run_fcm(subset(noised, decided), config, plain.centroids);
          row.error = center_error(report.reference_centers, refit.centroids);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DegenerateData && e.code() != ErrorCode::EmptyCluster &&
              e.code() != ErrorCode::InvalidClusterCount) {
            throw;
          }
          row.flagged = true;
        }
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

ErrorStats error_stats(std::span<const double> errors) {
  ErrorStats out;
  if (errors.empty()) return out;
  double sum = 0.0;
  for (double e : errors) sum += e;
  out.mean = sum / static_cast<double>(errors.size());
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - out.mean) * (e - out.mean);
    out.variance = ss / static_cast<double>(errors.size() - 1);
  }
  return out;
}

}  // namespace adfcm
