#include "adfcm/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "adfcm/error.hpp"

namespace adfcm {

void Dataset::validate() const {
  if (records.rows() == 0 || records.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "dataset needs at least one record and one feature");
  }
  for (double v : records.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite feature value");
  }
  if (feature_names.size() != records.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "feature_names length differs from feature count");
  }
  if (labels && labels->size() != records.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "labels length differs from record count");
  }
  if (!synthetic.empty() && synthetic.size() != records.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "synthetic flags length differs from record count");
  }
  if (!normalization.empty() && normalization.size() != records.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "normalization ranges differ from feature count");
  }
  if (image && image->width * image->height != records.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "image geometry differs from record count");
  }
}

Dataset make_dataset(Matrix records, std::vector<std::string> names,
                     std::optional<std::vector<std::string>> labels) {
  Dataset ds;
  if (names.empty()) {
    for (std::size_t j = 0; j < records.cols(); ++j) names.push_back("f" + std::to_string(j));
  }
  ds.records = std::move(records);
  ds.feature_names = std::move(names);
  ds.labels = std::move(labels);
  ds.validate();
  return ds;
}

std::vector<FeatureRange> feature_ranges(const Matrix& records) {
  std::vector<FeatureRange> out(records.cols());
  for (std::size_t j = 0; j < records.cols(); ++j) {
    double lo = records(0, j);
    double hi = lo;
    for (std::size_t k = 1; k < records.rows(); ++k) {
      lo = std::min(lo, records(k, j));
      hi = std::max(hi, records(k, j));
    }
    out[j] = {lo, hi};
  }
  return out;
}

Dataset normalized(Dataset ds) {
  if (ds.records.empty()) return ds;
  ds.normalization = feature_ranges(ds.records);
  ds.constant_features.assign(ds.dimension(), false);
  for (std::size_t j = 0; j < ds.dimension(); ++j) {
    const auto [lo, hi] = ds.normalization[j];
    const double span = hi - lo;
    ds.constant_features[j] = !(span > 0.0);
    for (std::size_t k = 0; k < ds.size(); ++k) {
      double& v = ds.records(k, j);
      v = ds.constant_features[j] ? 0.0 : (v - lo) / span;
    }
  }
  return ds;
}

Matrix denormalize(const Dataset& ds) {
  Matrix out = ds.records;
  if (ds.normalization.empty()) return out;
  for (std::size_t j = 0; j < ds.dimension(); ++j) {
    const auto [lo, hi] = ds.normalization[j];
    for (std::size_t k = 0; k < ds.size(); ++k) out(k, j) = out(k, j) * (hi - lo) + lo;
  }
  return out;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  Dataset out;
  out.records = Matrix(indices.size(), ds.dimension());
  out.feature_names = ds.feature_names;
  out.normalization = ds.normalization;
  out.constant_features = ds.constant_features;
  if (ds.labels) out.labels.emplace();
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t k = indices[r];
    if (k >= ds.size()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
    std::copy(ds.records.row(k).begin(), ds.records.row(k).end(), out.records.row(r).begin());
    if (ds.labels) out.labels->push_back((*ds.labels)[k]);
    if (!ds.synthetic.empty()) out.synthetic.push_back(ds.synthetic[k]);
  }
  return out;
}

}  // namespace adfcm
