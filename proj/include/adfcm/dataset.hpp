#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adfcm/matrix.hpp"

namespace adfcm {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const FeatureRange&) const = default;
};

/// Image layout of a dataset built from pixels; record k is pixel (k % width, k / width).
struct ImageGeometry {
  std::size_t width = 0;
  std::size_t height = 0;
};

/// N records by n finite features, with optional labels and bookkeeping.
struct Dataset {
  Matrix records;
  std::vector<std::string> feature_names;
  std::optional<std::vector<std::string>> labels;

  // Filled when min-max normalization was applied; one entry per feature.
  std::vector<FeatureRange> normalization;
  std::vector<bool> constant_features;

  // Per-record flag for records appended by a noise generator; empty means none.
  std::vector<bool> synthetic;

  std::optional<ImageGeometry> image;

  std::size_t size() const noexcept { return records.rows(); }
  std::size_t dimension() const noexcept { return records.cols(); }
  bool has_labels() const noexcept { return labels.has_value(); }
  bool is_synthetic(std::size_t k) const noexcept { return !synthetic.empty() && synthetic[k]; }

  /// Throws InvalidArgument / ShapeMismatch when an invariant is broken.
  void validate() const;
};

/// Builds and validates a dataset; empty `names` are filled with f0, f1, ...
Dataset make_dataset(Matrix records, std::vector<std::string> names = {},
                     std::optional<std::vector<std::string>> labels = std::nullopt);

/// Min-max scales every feature to [0, 1]. Constant features map to 0 and are flagged.
Dataset normalized(Dataset dataset);

/// Inverse of `normalized` (identity copy when the dataset was never normalized).
Matrix denormalize(const Dataset& dataset);

/// Records at `indices`, in that order, with labels and flags carried along.
Dataset subset(const Dataset& dataset, std::span<const std::size_t> indices);

std::vector<FeatureRange> feature_ranges(const Matrix& records);

}  // namespace adfcm
