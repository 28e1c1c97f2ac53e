#include "adfcm/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "adfcm/error.hpp"

namespace adfcm {

namespace {

double entropy_of_counts(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t n : counts) {
    if (n == 0) continue;
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double normalized_entropy(double h, std::size_t a, std::size_t b) {
  const std::size_t cap = std::min(a, b);
  if (cap < 2) return 0.0;
  return std::clamp(h / std::log2(static_cast<double>(cap)), 0.0, 1.0);
}

std::vector<std::size_t> bin_counts(const DiscreteColumn& d) {
  std::vector<std::size_t> counts(d.bin_count, 0);
  for (std::size_t v : d.values) ++counts.at(v);
  return counts;
}

}  // namespace

DiscreteColumn discretize(std::span<const double> column, std::size_t bins) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "discretize needs at least 2 bins");
  DiscreteColumn out;
  const std::size_t n = column.size();
  if (n == 0) return out;

  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t b = 1; b < bins; ++b) {
    const std::size_t idx = b * n / bins;
    if (idx == 0 || idx >= n) continue;
    // Move the cut to the start of the tie group containing sorted[idx].
    const double q = sorted[idx];
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), q);
    if (first == sorted.begin()) continue;
    const double edge = 0.5 * (*(first - 1) + q);
    if (out.bin_edges.empty() || edge > out.bin_edges.back()) out.bin_edges.push_back(edge);
  }
  out.bin_count = out.bin_edges.size() + 1;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = static_cast<std::size_t>(
        std::upper_bound(out.bin_edges.begin(), out.bin_edges.end(), column[k]) -
        out.bin_edges.begin());
  }
  return out;
}

DiscreteColumn as_discrete(std::span<const std::size_t> codes) {
  std::vector<std::size_t> distinct(codes.begin(), codes.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  DiscreteColumn out;
  out.values.reserve(codes.size());
  for (std::size_t c : codes) {
    out.values.push_back(static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), c) - distinct.begin()));
  }
  out.bin_count = std::max<std::size_t>(distinct.size(), 1);
  return out;
}

double entropy(const DiscreteColumn& d) {
  const auto counts = bin_counts(d);
  return entropy_of_counts(counts, d.values.size());
}

double relative_uncertainty(const DiscreteColumn& d, std::size_t samples) {
  const auto counts = bin_counts(d);
  const auto realized = static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
  return normalized_entropy(entropy_of_counts(counts, d.values.size()), realized, samples);
}

double conditional_ru(const DiscreteColumn& feature, std::span<const std::string> labels,
                      std::string_view class_label) {
  if (labels.size() != feature.values.size()) {
    throw Error(ErrorCode::ShapeMismatch, "labels length differs from feature length");
  }
  std::vector<std::size_t> counts(feature.bin_count, 0);
  std::size_t members = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] != class_label) continue;
    ++counts.at(feature.values[k]);
    ++members;
  }
  if (members == 0) {
    throw Error(ErrorCode::UnknownClass, "class '" + std::string(class_label) + "' not present");
  }
  return normalized_entropy(entropy_of_counts(counts, members), members, feature.bin_count);
}

double bias_coefficient(const DiscreteColumn& feature, std::span<const std::string> labels,
                        std::string_view class_label) {
  return 1.0 - conditional_ru(feature, labels, class_label);
}

double symmetric_uncertainty(const DiscreteColumn& feature, std::span<const std::string> labels) {
  const std::size_t n = feature.values.size();
  if (labels.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "labels length differs from feature length");
  }
  if (n == 0) return 0.0;
  std::map<std::string_view, std::vector<std::size_t>> by_class;
  for (std::size_t k = 0; k < n; ++k) {
    auto& counts = by_class[labels[k]];
    if (counts.empty()) counts.assign(feature.bin_count, 0);
    ++counts.at(feature.values[k]);
  }
  std::vector<std::size_t> class_sizes;
  double h_feature_given_class = 0.0;
  for (const auto& [label, counts] : by_class) {
    const std::size_t size = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    class_sizes.push_back(size);
    h_feature_given_class +=
        static_cast<double>(size) / static_cast<double>(n) * entropy_of_counts(counts, size);
  }
  const double h_feature = entropy(feature);
  const double h_class = entropy_of_counts(class_sizes, n);
  const double denom = h_feature + h_class;
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(2.0 * (h_feature - h_feature_given_class) / denom, 0.0, 1.0);
}

FeatureRanking select_features(const Dataset& ds, std::size_t k, std::size_t bins) {
  if (!ds.labels) throw Error(ErrorCode::LabelsRequired, "feature selection needs labels");
  if (k < 1 || k > ds.dimension()) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, feature count]");
  }
  const auto& labels = *ds.labels;
  FeatureRanking out;
  out.classes = labels;
  std::sort(out.classes.begin(), out.classes.end());
  out.classes.erase(std::unique(out.classes.begin(), out.classes.end()), out.classes.end());

  std::vector<double> column(ds.size());
  for (std::size_t j = 0; j < ds.dimension(); ++j) {
    for (std::size_t r = 0; r < ds.size(); ++r) column[r] = ds.records(r, j);
    const DiscreteColumn d = discretize(column, bins);
    FeatureScore score;
    score.feature_index = j;
    score.name = ds.feature_names[j];
    score.su = symmetric_uncertainty(d, labels);
    for (const std::string& cls : out.classes) {
      const double ru = conditional_ru(d, labels, cls);
      score.ru_per_class.push_back(ru);
      score.bias_per_class.push_back(1.0 - ru);
    }
    out.ranked.push_back(std::move(score));
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.su > b.su; });
  for (std::size_t i = 0; i < k; ++i) out.selected.push_back(out.ranked[i].feature_index);
  return out;
}

}  // namespace adfcm
