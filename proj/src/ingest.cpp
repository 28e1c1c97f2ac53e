#include "adfcm/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "adfcm/error.hpp"
#include "adfcm/random.hpp"

namespace adfcm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool is_index(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string quote_field(const std::string& s, char delimiter) {
  if (s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char ch = 0;
  const auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    const bool blank = row.size() == 1 && trim(row.front()).empty() && !field_started;
    if (!blank) rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      field_started = true;
    } else if (ch == delimiter) {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (ch == '\n') {
      end_row();
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get(ch);
      end_row();
    } else {
      field += ch;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field");
  if (!field.empty() || !row.empty() || field_started) end_row();
  return rows;
}

Dataset parse_csv(std::istream& in, const CsvSchema& schema, bool normalize) {
  const auto rows = read_csv_rows(in, schema.delimiter);
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty CSV input");
  const std::size_t first_data = schema.has_header ? 1 : 0;
  if (rows.size() <= first_data) throw Error(ErrorCode::ParseError, "CSV has no records");
  const std::size_t ncols = rows.front().size();

  std::optional<std::size_t> label_col;
  if (schema.label_column) {
    const std::string_view want = trim(*schema.label_column);
    if (schema.has_header) {
      for (std::size_t c = 0; c < ncols; ++c) {
        if (trim(rows.front()[c]) == want) {
          label_col = c;
          break;
        }
      }
    }
    if (!label_col && is_index(want)) {
      const auto idx = std::stoull(std::string(want));
      if (idx < ncols) label_col = static_cast<std::size_t>(idx);
    }
    if (!label_col) {
      throw Error(ErrorCode::SchemaError, "label column '" + *schema.label_column + "' not found");
    }
  }
  const std::size_t nfeat = ncols - (label_col ? 1 : 0);
  if (nfeat == 0) throw Error(ErrorCode::SchemaError, "no feature columns");

  std::vector<std::string> names;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (label_col && c == *label_col) continue;
    names.push_back(schema.has_header ? std::string(trim(rows.front()[c]))
                                      : "f" + std::to_string(names.size()));
  }

  Matrix records(rows.size() - first_data, nfeat);
  std::vector<std::string> labels;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != ncols) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(r + 1) + " has " +
                                             std::to_string(row.size()) + " fields, expected " +
                                             std::to_string(ncols));
    }
    std::size_t j = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (label_col && c == *label_col) {
        labels.emplace_back(trim(row[c]));
        continue;
      }
      const auto v = parse_number(row[c]);
      if (!v) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(r + 1) + ", column " +
                                               std::to_string(c + 1) + ": '" + row[c] +
                                               "' is not a finite number");
      }
      records(r - first_data, j++) = *v;
    }
  }
  Dataset ds = make_dataset(std::move(records), std::move(names),
                            label_col ? std::optional(std::move(labels)) : std::nullopt);
  return normalize ? normalized(std::move(ds)) : ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema, bool normalize) {
  auto in = open_input(path);
  return parse_csv(in, schema, normalize);
}

void write_csv(const Dataset& ds, std::ostream& out, char delimiter) {
  for (std::size_t j = 0; j < ds.dimension(); ++j) {
    if (j > 0) out << delimiter;
    out << quote_field(ds.feature_names[j], delimiter);
  }
  if (ds.labels) out << delimiter << "label";
  out << '\n';
  for (std::size_t k = 0; k < ds.size(); ++k) {
    for (std::size_t j = 0; j < ds.dimension(); ++j) {
      if (j > 0) out << delimiter;
      out << format_number(ds.records(k, j));
    }
    if (ds.labels) out << delimiter << quote_field((*ds.labels)[k], delimiter);
    out << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path, char delimiter) {
  auto out = open_output(path);
  write_csv(ds, out, delimiter);
}

GrayImage parse_pgm(std::istream& in) {
  const auto next_token = [&]() -> std::string {
    std::string tok;
    char ch = 0;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!tok.empty()) return tok;
      } else {
        tok += ch;
        if (tok.size() > 16) throw Error(ErrorCode::ParseError, "PGM token too long");
      }
    }
    return tok;
  };
  const auto next_uint = [&](const char* what) -> std::size_t {
    const std::string tok = next_token();
    if (!is_index(tok)) throw Error(ErrorCode::ParseError, std::string("bad PGM ") + what);
    return static_cast<std::size_t>(std::stoull(tok));
  };

  std::string magic(2, '\0');
  if (!in.read(magic.data(), 2) || (magic != "P2" && magic != "P5")) {
    throw Error(ErrorCode::ParseError, "not a P2/P5 PGM");
  }
  const int next = in.peek();
  if (next == std::char_traits<char>::eof() || !std::isspace(next)) {
    throw Error(ErrorCode::ParseError, "malformed PGM header");
  }
  GrayImage img;
  img.width = next_uint("width");
  img.height = next_uint("height");
  const std::size_t maxval = next_uint("maxval");
  if (img.width == 0 || img.height == 0) throw Error(ErrorCode::ParseError, "PGM has no pixels");
  if (maxval != 255) throw Error(ErrorCode::ParseError, "only maxval 255 is supported");

  const std::size_t count = img.width * img.height;
  img.pixels.resize(count);
  if (magic == "P5") {
    // next_token consumed the single whitespace byte after maxval.
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count))) {
      throw Error(ErrorCode::ParseError, "truncated P5 raster");
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t v = next_uint("pixel");
      if (v > maxval) throw Error(ErrorCode::ParseError, "pixel exceeds maxval");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  auto in = open_input(path, std::ios::binary);
  return parse_pgm(in);
}

void write_pgm(const GrayImage& img, std::ostream& out) {
  if (img.pixels.size() != img.width * img.height) {
    throw Error(ErrorCode::ShapeMismatch, "pixel count differs from width * height");
  }
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  auto out = open_output(path, std::ios::binary);
  write_pgm(img, out);
}

std::uint8_t to_intensity(double unit_value) noexcept {
  const double scaled = std::floor(unit_value * 255.0 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

Dataset image_to_dataset(const GrayImage& img) {
  if (img.width == 0 || img.height == 0 || img.pixels.size() != img.width * img.height) {
    throw Error(ErrorCode::ShapeMismatch, "invalid image");
  }
  Matrix records(img.pixels.size(), 1);
  for (std::size_t k = 0; k < img.pixels.size(); ++k) records(k, 0) = img.pixels[k] / 255.0;
  Dataset ds = make_dataset(std::move(records), {"intensity"});
  ds.image = ImageGeometry{img.width, img.height};
  return ds;
}

GrayImage dataset_to_image(const Dataset& ds) {
  if (!ds.image || ds.dimension() != 1) {
    throw Error(ErrorCode::ShapeMismatch, "dataset does not carry an image layout");
  }
  GrayImage img{ds.image->width, ds.image->height, std::vector<std::uint8_t>(ds.size())};
  for (std::size_t k = 0; k < ds.size(); ++k) img.pixels[k] = to_intensity(ds.records(k, 0));
  return img;
}

GrayImage render_segmentation(const GrayImage& img, const OutcomeSet& outcomes,
                              const Matrix& centroids) {
  if (outcomes.size() != img.pixels.size()) {
    throw Error(ErrorCode::ShapeMismatch, "outcome count differs from pixel count");
  }
  if (centroids.cols() != 1) throw Error(ErrorCode::ShapeMismatch, "expected 1-D centroids");
  GrayImage out{img.width, img.height, std::vector<std::uint8_t>(img.pixels.size(), 0)};
  for (const RecordOutcome& r : outcomes.records) {
    if (r.ambiguous()) continue;
    if (r.dominant_cluster >= centroids.rows()) {
      throw Error(ErrorCode::ShapeMismatch, "outcome refers to a missing centroid");
    }
    out.pixels[r.record_index] = to_intensity(centroids(r.dominant_cluster, 0));
  }
  return out;
}

Blobs make_blobs(std::size_t clusters, std::size_t per_cluster, double spread,
                 std::span<const FeatureRange> bounds, std::uint64_t seed) {
  if (clusters == 0 || per_cluster == 0 || bounds.empty()) {
    throw Error(ErrorCode::InvalidArgument, "blobs need clusters, points and dimensions");
  }
  if (!(spread >= 0.0)) throw Error(ErrorCode::InvalidArgument, "spread must be >= 0");
  std::mt19937_64 rng(seed);
  const std::size_t dim = bounds.size();
  Blobs out;
  out.centers = Matrix(clusters, dim);
  for (std::size_t i = 0; i < clusters; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out.centers(i, j) = uniform(rng, bounds[j].min, bounds[j].max);
  }
  Matrix records(clusters * per_cluster, dim);
  std::vector<std::string> labels;
  labels.reserve(records.rows());
  for (std::size_t i = 0; i < clusters; ++i) {
    for (std::size_t p = 0; p < per_cluster; ++p) {
      const std::size_t k = i * per_cluster + p;
      for (std::size_t j = 0; j < dim; ++j) {
        records(k, j) = out.centers(i, j) + spread * standard_normal(rng);
      }
      labels.push_back("blob" + std::to_string(i));
    }
  }
  out.data = make_dataset(std::move(records), {}, std::move(labels));
  return out;
}

}  // namespace adfcm
