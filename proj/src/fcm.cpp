#include "adfcm/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "adfcm/error.hpp"
#include "parallel.hpp"

namespace adfcm {

namespace {

// Euclidean distance below 1e-12 counts as coincident.
constexpr double kZeroDistanceSq = 1e-24;

void check_fuzzifier(double m) {
  if (!(m > 1.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::InvalidArgument, "fuzzifier must be finite and > 1");
  }
}

void membership_column(std::span<const double> x, const Matrix& centroids, double m,
                       std::span<double> d2, std::span<double> out) {
  const std::size_t c = centroids.rows();
  std::size_t zeros = 0;
  double dmin = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    d2[i] = squared_distance(x, centroids.row(i));
    if (d2[i] < kZeroDistanceSq) ++zeros;
    if (i == 0 || d2[i] < dmin) dmin = d2[i];
  }
  if (zeros > 0) {
    const double share = 1.0 / static_cast<double>(zeros);
    for (std::size_t i = 0; i < c; ++i) out[i] = d2[i] < kZeroDistanceSq ? share : 0.0;
    return;
  }
  // u_i = 1 / sum_j (d_i/d_j)^(1/(m-1)) in squared distances, scaled by the
  // nearest distance so the powers stay in (0, 1].
  const double exponent = 1.0 / (m - 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    out[i] = std::pow(dmin / d2[i], exponent);
    total += out[i];
  }
  for (std::size_t i = 0; i < c; ++i) out[i] /= total;
}

}  // namespace

void FcmConfig::validate(std::size_t n_records) const {
  if (clusters == 0 || clusters > n_records) {
    throw Error(ErrorCode::InvalidClusterCount, "cluster count " + std::to_string(clusters) +
                                                    " not in [1, " + std::to_string(n_records) +
                                                    "]");
  }
  check_fuzzifier(fuzzifier);
  if (max_iter == 0) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
}

MembershipMatrix::MembershipMatrix(Matrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() == 0 || u_.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "membership matrix is empty");
  }
  for (std::size_t k = 0; k < u_.cols(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u_.rows(); ++i) {
      const double v = u_(i, k);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "membership outside [0,1] at record " + std::to_string(k));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw Error(ErrorCode::InvalidArgument,
                  "memberships of record " + std::to_string(k) + " do not sum to 1");
    }
  }
}

MembershipMatrix MembershipMatrix::from_records(const Matrix& per_record, double tol) {
  Matrix u(per_record.cols(), per_record.rows());
  for (std::size_t k = 0; k < per_record.rows(); ++k) {
    for (std::size_t i = 0; i < per_record.cols(); ++i) u(i, k) = per_record(k, i);
  }
  return MembershipMatrix(std::move(u), tol);
}

std::vector<double> MembershipMatrix::column(std::size_t record) const {
  std::vector<double> out(u_.rows());
  for (std::size_t i = 0; i < u_.rows(); ++i) out[i] = u_(i, record);
  return out;
}

std::size_t dominant_cluster(std::span<const double> column) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < column.size(); ++i) {
    if (column[i] > column[best]) best = i;
  }
  return best;
}

Matrix init_centroids(const Dataset& ds, std::size_t c, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dataset is empty");
  if (c == 0 || c > n) {
    throw Error(ErrorCode::InvalidClusterCount, "cluster count " + std::to_string(c) +
                                                    " not in [1, " + std::to_string(n) + "]");
  }
  std::mt19937_64 rng(seed);
  Matrix centroids(c, ds.dimension());
  std::vector<double> nearest(n);

  std::size_t pick = static_cast<std::size_t>(rng() % n);
  for (std::size_t i = 0; i < c; ++i) {
    if (i > 0) {
      pick = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) -
                                      nearest.begin());
      if (!(nearest[pick] > 0.0)) {
        throw Error(ErrorCode::DegenerateData,
                    "fewer than " + std::to_string(c) + " distinct records");
      }
    }
    const auto chosen = ds.records.row(pick);
    std::copy(chosen.begin(), chosen.end(), centroids.row(i).begin());
    for (std::size_t k = 0; k < n; ++k) {
      const double d = squared_distance(ds.records.row(k), chosen);
      nearest[k] = i == 0 ? d : std::min(nearest[k], d);
    }
  }
  return centroids;
}

MembershipMatrix update_memberships(const Dataset& ds, const Matrix& centroids, double m,
                                    std::size_t threads) {
  check_fuzzifier(m);
  if (centroids.rows() == 0 || centroids.cols() != ds.dimension()) {
    throw Error(ErrorCode::ShapeMismatch, "centroid dimension differs from dataset");
  }
  const std::size_t c = centroids.rows();
  const std::size_t n = ds.size();
  Matrix u(c, n);
  detail::for_each_chunk(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> d2(c);
    std::vector<double> col(c);
    for (std::size_t k = begin; k < end; ++k) {
      membership_column(ds.records.row(k), centroids, m, d2, col);
      for (std::size_t i = 0; i < c; ++i) u(i, k) = col[i];
    }
  });
  return MembershipMatrix(std::move(u), MembershipMatrix::Unchecked{});
}

Matrix update_centroids(const Dataset& ds, const MembershipMatrix& u, double m,
                        std::size_t threads) {
  check_fuzzifier(m);
  if (u.records() != ds.size()) {
    throw Error(ErrorCode::ShapeMismatch, "membership columns differ from record count");
  }
  const std::size_t c = u.clusters();
  const std::size_t dim = ds.dimension();
  const std::size_t chunks = detail::chunk_count(ds.size());

  struct Partial {
    std::vector<double> weight;
    Matrix sum;
  };
  std::vector<Partial> partials(chunks, Partial{std::vector<double>(c, 0.0), Matrix(c, dim)});
  detail::for_each_chunk(ds.size(), threads,
                         [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                           Partial& p = partials[chunk];
                           for (std::size_t k = begin; k < end; ++k) {
                             const auto x = ds.records.row(k);
                             for (std::size_t i = 0; i < c; ++i) {
                               const double w = std::pow(u(i, k), m);
                               p.weight[i] += w;
                               for (std::size_t j = 0; j < dim; ++j) p.sum(i, j) += w * x[j];
                             }
                           }
                         });

  Matrix centroids(c, dim);
  std::vector<double> weight(c, 0.0);
  for (const Partial& p : partials) {
    for (std::size_t i = 0; i < c; ++i) {
      weight[i] += p.weight[i];
      for (std::size_t j = 0; j < dim; ++j) centroids(i, j) += p.sum(i, j);
    }
  }
  for (std::size_t i = 0; i < c; ++i) {
    if (!(weight[i] > 0.0)) {
      throw Error(ErrorCode::EmptyCluster, "cluster " + std::to_string(i) + " has zero weight");
    }
    for (std::size_t j = 0; j < dim; ++j) centroids(i, j) /= weight[i];
  }
  return centroids;
}

double objective(const Dataset& ds, const MembershipMatrix& u, const Matrix& centroids,
                 double m) {
  if (u.records() != ds.size() || u.clusters() != centroids.rows() ||
      centroids.cols() != ds.dimension()) {
    throw Error(ErrorCode::ShapeMismatch, "objective inputs have inconsistent shapes");
  }
  double q = 0.0;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    for (std::size_t i = 0; i < u.clusters(); ++i) {
      const double w = u(i, k);
      if (w == 0.0) continue;
      q += std::pow(w, m) * squared_distance(ds.records.row(k), centroids.row(i));
    }
  }
  return q;
}

FcmModel run_fcm(const Dataset& ds, const FcmConfig& config) {
  config.validate(ds.size());
  return run_fcm(ds, config, init_centroids(ds, config.clusters, config.seed));
}

FcmModel run_fcm(const Dataset& ds, const FcmConfig& config, Matrix initial_centroids) {
  config.validate(ds.size());
  if (initial_centroids.rows() != config.clusters ||
      initial_centroids.cols() != ds.dimension()) {
    throw Error(ErrorCode::ShapeMismatch, "initial centroids have the wrong shape");
  }
  const double m = config.fuzzifier;
  FcmModel model;
  model.fuzzifier = m;
  model.centroids = std::move(initial_centroids);

  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    const MembershipMatrix u = update_memberships(ds, model.centroids, m, config.threads);
    model.centroids = update_centroids(ds, u, m, config.threads);
    const double q = objective(ds, u, model.centroids, m);
    model.iterations_run = it;
    if (!model.objective_trace.empty()) {
      const double prev = model.objective_trace.back();
      model.objective_trace.push_back(q);
      if (std::abs(q - prev) < config.tol * std::max(1.0, prev)) {
        model.converged = true;
        break;
      }
    } else {
      model.objective_trace.push_back(q);
    }
  }
  model.memberships = update_memberships(ds, model.centroids, m, config.threads);
  return model;
}

}  // namespace adfcm
