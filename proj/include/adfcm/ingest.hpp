#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adfcm/ambiguity.hpp"
#include "adfcm/dataset.hpp"
#include "adfcm/matrix.hpp"

namespace adfcm {

struct CsvSchema {
  bool has_header = true;
  /// Header name, or a 0-based column index written as digits.
  std::optional<std::string> label_column;
  char delimiter = ',';
};

/// RFC-4180 style reader: quoted fields, doubled quotes, CRLF line ends.
/// Every non-label cell must parse as a finite number.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema, bool normalize);
Dataset parse_csv(std::istream& in, const CsvSchema& schema, bool normalize);

/// Writes header plus records at round-trip precision; labels go last as "label".
void write_csv(const Dataset& dataset, std::ostream& out, char delimiter = ',');
void write_csv(const Dataset& dataset, const std::filesystem::path& path, char delimiter = ',');

/// Splits one CSV document into rows of fields.
std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, char delimiter = ',');

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels.at(y * width + x); }
  bool operator==(const GrayImage&) const = default;
};

/// Reads plain (P2) or binary (P5) PGM with maxval 255.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(std::istream& in);

/// Always emits binary P5.
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
void write_pgm(const GrayImage& img, std::ostream& out);

/// One record per pixel, single feature = intensity / 255.
Dataset image_to_dataset(const GrayImage& img);

/// Inverse of image_to_dataset (intensities rounded half-up).
GrayImage dataset_to_image(const Dataset& dataset);

/// Assigned pixels take their cluster centroid's intensity; ambiguous pixels are 0.
GrayImage render_segmentation(const GrayImage& img, const OutcomeSet& outcomes,
                              const Matrix& centroids);

std::uint8_t to_intensity(double unit_value) noexcept;

struct Blobs {
  Dataset data;
  Matrix centers;
};

/// Gaussian blobs around uniform-random centers within `bounds` (one range per
/// dimension). Labels are "blob0", "blob1", ...
Blobs make_blobs(std::size_t clusters, std::size_t per_cluster, double spread,
                 std::span<const FeatureRange> bounds, std::uint64_t seed);

}  // namespace adfcm
