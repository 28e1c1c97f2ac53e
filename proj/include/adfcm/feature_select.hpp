#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adfcm/dataset.hpp"

namespace adfcm {

struct DiscreteColumn {
  std::vector<std::size_t> values;  // bin index per record
  std::size_t bin_count = 1;        // realized bins
  std::vector<double> bin_edges;    // value v lies in bin #(edges <= v)
};

/// Equal-frequency (quantile) binning. Cut points are midpoints between
/// adjacent distinct sorted values; tied values always share a bin.
DiscreteColumn discretize(std::span<const double> column, std::size_t bins);

/// Wraps already-discrete codes as a column, renumbering them densely in ascending order.
DiscreteColumn as_discrete(std::span<const std::size_t> codes);

/// Shannon entropy in bits over realized bins.
double entropy(const DiscreteColumn& d);

/// H(X) / log2(min(N_X, samples)); 0 when that minimum is below 2.
double relative_uncertainty(const DiscreteColumn& d, std::size_t samples);

/// Within-class normalized entropy of `feature` for records labelled `class_label`.
double conditional_ru(const DiscreteColumn& feature, std::span<const std::string> labels,
                      std::string_view class_label);

/// 1 - conditional_ru.
double bias_coefficient(const DiscreteColumn& feature, std::span<const std::string> labels,
                        std::string_view class_label);

/// 2 * (H(A) - H(A|C)) / (H(A) + H(C)); 0 when both entropies vanish.
double symmetric_uncertainty(const DiscreteColumn& feature, std::span<const std::string> labels);

struct FeatureScore {
  std::size_t feature_index = 0;
  std::string name;
  double su = 0.0;
  std::vector<double> ru_per_class;    // aligned with FeatureRanking::classes
  std::vector<double> bias_per_class;
};

struct FeatureRanking {
  std::vector<std::string> classes;   // sorted distinct labels
  std::vector<FeatureScore> ranked;   // every feature, SU descending, index ascending on ties
  std::vector<std::size_t> selected;  // the top-k feature indices
};

/// Ranks the dataset's features against its labels. Throws LabelsRequired
/// when the dataset is unlabelled and InvalidArgument unless 1 <= k <= n.
FeatureRanking select_features(const Dataset& dataset, std::size_t k, std::size_t bins = 10);

}  // namespace adfcm
