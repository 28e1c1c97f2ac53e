#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "adfcm/ambiguity.hpp"
#include "adfcm/error.hpp"
#include "adfcm/eval.hpp"
#include "adfcm/fcm.hpp"
#include "adfcm/feature_select.hpp"
#include "adfcm/ingest.hpp"

namespace py = pybind11;
using namespace adfcm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::ShapeMismatch, "expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  Matrix m(rows, cols);
  auto view = a.unchecked<2>();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = view(r, c);
  }
  return m;
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  }
  return out;
}

Dataset to_dataset(const Array& x, std::optional<std::vector<std::string>> labels = std::nullopt,
                   std::vector<std::string> names = {}) {
  return make_dataset(to_matrix(x), std::move(names), std::move(labels));
}

FcmConfig config(std::size_t clusters, double fuzzifier, std::size_t max_iter, double tol,
                 std::uint64_t seed, std::size_t threads) {
  FcmConfig cfg;
  cfg.clusters = clusters;
  cfg.fuzzifier = fuzzifier;
  cfg.max_iter = max_iter;
  cfg.tol = tol;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

py::dict sweep_row(const SweepRow& r) {
  py::dict d;
  d["threshold"] = r.threshold;
  d["n"] = r.n;
  d["nar"] = r.nar;
  d["ntr"] = r.ntr;
  d["nfr"] = r.nfr;
  d["nfra"] = r.nfra;
  d["par"] = r.par;
  d["pbfra"] = r.pbfra;
  d["accuracy"] = r.accuracy ? py::object(py::float_(*r.accuracy)) : py::object(py::none());
  return d;
}

}  // namespace

PYBIND11_MODULE(_adfcm, m) {
  m.doc() = "Fuzzy C-Means with certainty-based ambiguity detection";
  py::register_exception<Error>(m, "AdfcmError", PyExc_ValueError);

  m.def(
      "fcm",
      [](const Array& x, std::size_t clusters, double fuzzifier, std::size_t max_iter, double tol,
         std::uint64_t seed, std::size_t threads) {
        const Dataset ds = to_dataset(x);
        FcmModel model;
        {
          py::gil_scoped_release release;
          model = run_fcm(ds, config(clusters, fuzzifier, max_iter, tol, seed, threads));
        }
        py::dict d;
        d["centroids"] = to_array(model.centroids);
        d["memberships"] = to_array(model.memberships.matrix());
        d["objective_trace"] = model.objective_trace;
        d["iterations"] = model.iterations_run;
        d["converged"] = model.converged;
        return d;
      },
      py::arg("x"), py::arg("clusters"), py::arg("fuzzifier") = 2.0, py::arg("max_iter") = 300,
      py::arg("tol") = 1e-6, py::arg("seed") = 0, py::arg("threads") = 1,
      "Fit FCM on an N x n array. Memberships are returned as c x N.");

  m.def(
      "p_matrix", [](const Array& u) { return to_array(compute_p_matrix(MembershipMatrix(to_matrix(u))).p); },
      py::arg("memberships"));

  m.def(
      "certainty_factors",
      [](const Array& u) {
        const MembershipMatrix mm(to_matrix(u));
        return certainty_factors(mm, compute_p_matrix(mm));
      },
      py::arg("memberships"));

  m.def(
      "classify",
      [](const Array& u, double threshold) {
        const MembershipMatrix mm(to_matrix(u));
        const OutcomeSet out = classify(mm, compute_p_matrix(mm), CertaintyThreshold{threshold});
        std::vector<std::size_t> dominant;
        std::vector<double> certainty;
        std::vector<bool> ambiguous;
        for (const RecordOutcome& r : out.records) {
          dominant.push_back(r.dominant_cluster);
          certainty.push_back(r.certainty);
          ambiguous.push_back(r.ambiguous());
        }
        py::dict d;
        d["dominant_cluster"] = dominant;
        d["certainty"] = certainty;
        d["ambiguous"] = ambiguous;
        return d;
      },
      py::arg("memberships"), py::arg("threshold") = 0.4);

  m.def(
      "sweep",
      [](const Array& u, const std::vector<std::string>& labels,
         const std::vector<double>& thresholds) {
        py::list rows;
        for (const SweepRow& r : sweep(MembershipMatrix(to_matrix(u)), labels, thresholds)) {
          rows.append(sweep_row(r));
        }
        return rows;
      },
      py::arg("memberships"), py::arg("labels"), py::arg("thresholds"));

  m.def(
      "select_features",
      [](const Array& x, const std::vector<std::string>& labels, std::size_t k, std::size_t bins,
         std::vector<std::string> names) {
        const FeatureRanking r = select_features(to_dataset(x, labels, std::move(names)), k, bins);
        py::list ranked;
        for (const FeatureScore& s : r.ranked) {
          py::dict d;
          d["feature_index"] = s.feature_index;
          d["feature"] = s.name;
          d["su"] = s.su;
          d["ru"] = s.ru_per_class;
          d["bias"] = s.bias_per_class;
          ranked.append(d);
        }
        py::dict d;
        d["classes"] = r.classes;
        d["ranked"] = ranked;
        d["selected"] = r.selected;
        return d;
      },
      py::arg("x"), py::arg("labels"), py::arg("k"), py::arg("bins") = 10,
      py::arg("names") = std::vector<std::string>{});

  m.def(
      "center_error",
      [](const Array& a, const Array& b) { return center_error(to_matrix(a), to_matrix(b)); },
      py::arg("true_centers"), py::arg("estimated_centers"));

  m.def(
      "make_blobs",
      [](std::size_t clusters, std::size_t per_cluster, double spread,
         const std::vector<std::pair<double, double>>& bounds, std::uint64_t seed) {
        std::vector<FeatureRange> ranges;
        for (const auto& [lo, hi] : bounds) ranges.push_back({lo, hi});
        const Blobs b = make_blobs(clusters, per_cluster, spread, ranges, seed);
        return py::make_tuple(to_array(b.data.records), *b.data.labels, to_array(b.centers));
      },
      py::arg("clusters"), py::arg("per_cluster"), py::arg("spread"), py::arg("bounds"),
      py::arg("seed") = 0, "Returns (records, labels, centers).");

  m.def(
      "load_csv",
      [](const std::string& path, std::optional<std::string> label_column, bool has_header,
         char delimiter, bool normalize) {
        CsvSchema schema;
        schema.has_header = has_header;
        schema.label_column = std::move(label_column);
        schema.delimiter = delimiter;
        const Dataset ds = load_csv(path, schema, normalize);
        py::object labels = ds.labels ? py::cast(*ds.labels) : py::none();
        return py::make_tuple(to_array(ds.records), labels, ds.feature_names);
      },
      py::arg("path"), py::arg("label_column") = py::none(), py::arg("has_header") = true,
      py::arg("delimiter") = ',', py::arg("normalize") = true,
      "Returns (records, labels or None, feature_names).");

  m.def(
      "privacy_experiment",
      [](const Array& x, double noise_fraction, std::size_t clusters,
         const std::vector<double>& thresholds, std::uint64_t seed, double fuzzifier) {
        const PrivacyReport rep = privacy_experiment(
            to_dataset(x), noise_fraction, config(clusters, fuzzifier, 300, 1e-6, seed, 1),
            thresholds, seed);
        py::list rows;
        for (const PrivacyRow& r : rep.rows) {
          py::dict d;
          d["threshold"] = r.threshold;
          d["error"] = r.error;
          d["n_ambiguous"] = r.n_ambiguous;
          d["flagged"] = r.flagged;
          rows.append(d);
        }
        py::dict d;
        d["reference_centers"] = to_array(rep.reference_centers);
        d["plain_centers"] = to_array(rep.plain_centers);
        d["plain_error"] = rep.plain_error;
        d["noise_records"] = rep.noise_records;
        d["rows"] = rows;
        return d;
      },
      py::arg("x"), py::arg("noise_fraction"), py::arg("clusters"), py::arg("thresholds"),
      py::arg("seed") = 0, py::arg("fuzzifier") = 2.0);
}
