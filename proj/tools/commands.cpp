#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "adfcm/ambiguity.hpp"
#include "adfcm/error.hpp"
#include "adfcm/eval.hpp"
#include "adfcm/fcm.hpp"
#include "adfcm/feature_select.hpp"
#include "adfcm/ingest.hpp"
#include "adfcm/report.hpp"

namespace adfcm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output files are staged in memory and written in one go once the command
// has finished computing, so a failing command leaves nothing behind.
class OutputBatch {
 public:
  void add(fs::path path, std::string contents) {
    files_.emplace_back(std::move(path), std::move(contents));
  }

  void commit() const {
    std::vector<std::pair<fs::path, fs::path>> staged;
    try {
      for (const auto& [path, contents] : files_) {
        fs::path tmp = path;
        tmp += ".partial";
        std::ofstream out(tmp, std::ios::binary);
        out << contents;
        out.close();
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        staged.emplace_back(tmp, path);
      }
      for (const auto& [tmp, path] : staged) fs::rename(tmp, path);
    } catch (...) {
      std::error_code ec;
      for (const auto& entry : staged) fs::remove(entry.first, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

struct CommonOptions {
  std::string input;
  std::string output;
  std::size_t clusters = 2;
  double fuzzifier = 2.0;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string label_column;
  bool no_normalize = false;
  bool no_header = false;
  char delimiter = ',';
  std::string format = "csv";

  FcmConfig fcm() const {
    FcmConfig cfg;
    cfg.clusters = clusters;
    cfg.fuzzifier = fuzzifier;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  }

  CsvSchema schema() const {
    CsvSchema s;
    s.has_header = !no_header;
    if (!label_column.empty()) s.label_column = label_column;
    s.delimiter = delimiter;
    return s;
  }

  Dataset load() const { return load_csv(input, schema(), !no_normalize); }
};

void add_fcm_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--clusters,-c", o.clusters, "Number of clusters")->capture_default_str();
  cmd->add_option("--fuzzifier,-m", o.fuzzifier, "Fuzzifier m (> 1)")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "Maximum FCM iterations")->capture_default_str();
  cmd->add_option("--tol", o.tol, "Relative objective change for convergence")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for centroid initialization")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str();
}

void add_table_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--label-column", o.label_column, "Label column name or 0-based index");
  cmd->add_flag("--no-normalize", o.no_normalize, "Skip min-max scaling of features");
  cmd->add_flag("--no-header", o.no_header, "Input CSV has no header row");
  cmd->add_option("--delimiter", o.delimiter, "CSV field delimiter")->capture_default_str();
}

void add_format_flag(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

json header(const std::string& command) {
  return json{{"schema_version", report::kSchemaVersion}, {"command", command}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path with_suffix(const std::string& base, const std::string& suffix) {
  return fs::path(base + suffix);
}

std::vector<double> default_sweep_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 9; ++i) t.push_back(i * 0.05);
  return t;
}

void require_sorted(std::vector<double>& thresholds) {
  for (double t : thresholds) CertaintyThreshold{t};
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw UsageError("--thresholds must be ascending");
  }
}

// ---------------------------------------------------------------- cluster

struct ClusterOptions {
  CommonOptions common;
  double threshold = 0.4;
  std::string memberships;
  std::string summary;
  std::string export_ambiguous;
};

int cmd_cluster(const ClusterOptions& o) {
  const CommonOptions& c = o.common;
  if (c.output.empty()) throw UsageError("--output is required");
  if (c.input.empty() && o.memberships.empty()) {
    throw UsageError("--input or --memberships is required");
  }
  const CertaintyThreshold threshold(o.threshold);

  std::optional<Dataset> ds;
  if (!c.input.empty()) ds = c.load();

  MembershipMatrix u;
  std::optional<FcmModel> model;
  if (!o.memberships.empty()) {
    CsvSchema ms;
    ms.has_header = !c.no_header;
    ms.delimiter = c.delimiter;
    const Dataset table = load_csv(o.memberships, ms, false);
    u = MembershipMatrix::from_records(table.records, 1e-6);
    if (ds && ds->size() != u.records()) {
      throw Error(ErrorCode::ShapeMismatch, "memberships and input differ in record count");
    }
  } else {
    model = run_fcm(*ds, c.fcm());
    u = model->memberships;
  }

  const PMatrix p = compute_p_matrix(u);
  const OutcomeSet outcomes = classify(u, p, threshold);

  json summary = header("cluster");
  summary["threshold"] = threshold.value();
  summary["n"] = outcomes.size();
  summary["clusters"] = u.clusters();
  summary["nar"] = outcomes.ambiguous_count();
  summary["par"] = 100.0 * static_cast<double>(outcomes.ambiguous_count()) /
                   static_cast<double>(outcomes.size());
  summary["cluster_avgs"] = p.cluster_avgs;
  summary["p_matrix"] = matrix_json(p.p);
  if (model) {
    summary["fuzzifier"] = model->fuzzifier;
    summary["iterations"] = model->iterations_run;
    summary["converged"] = model->converged;
    summary["objective"] = model->objective_trace.back();
    summary["centroids"] = matrix_json(model->centroids);
  }
  if (ds && ds->labels) {
    const std::vector<double> t{threshold.value()};
    const SweepRow row = sweep(u, *ds->labels, t).front();
    const json row_json = report::sweep_row_json(row);
    for (const auto& [key, value] : row_json.items()) summary[key] = value;
  }

  OutputBatch batch;
  if (c.format == "json") {
    json records = json::array();
    for (const RecordOutcome& r : outcomes.records) {
      records.push_back({{"record_index", r.record_index},
                         {"dominant_cluster", r.dominant_cluster},
                         {"certainty", r.certainty},
                         {"status", r.ambiguous() ? "ambiguous" : "assigned"}});
    }
    summary["records"] = std::move(records);
    batch.add(c.output, dump(summary));
  } else {
    std::ostringstream csv;
    report::write_outcomes_csv(outcomes, csv);
    batch.add(c.output, csv.str());
    batch.add(o.summary.empty() ? with_suffix(c.output, ".summary.json") : fs::path(o.summary),
              dump(summary));
  }
  if (!o.export_ambiguous.empty()) {
    if (!ds) throw UsageError("--export-ambiguous needs --input");
    std::ostringstream csv;
    report::write_ambiguous_csv(export_ambiguous(outcomes, *ds), csv);
    batch.add(o.export_ambiguous, csv.str());
  }
  batch.commit();
  return kOk;
}

// ------------------------------------------------------------------ sweep

struct SweepOptions {
  CommonOptions common;
  std::vector<double> thresholds = default_sweep_thresholds();
};

int cmd_sweep(SweepOptions o) {
  const CommonOptions& c = o.common;
  if (c.input.empty() || c.output.empty()) throw UsageError("--input and --output are required");
  require_sorted(o.thresholds);
  const Dataset ds = c.load();
  if (!ds.labels) {
    throw Error(ErrorCode::LabelsRequired, "sweep needs ground truth; pass --label-column");
  }
  const FcmModel model = run_fcm(ds, c.fcm());
  const auto rows = sweep(model, *ds.labels, o.thresholds);

  OutputBatch batch;
  if (c.format == "json") {
    json j = header("sweep");
    j["clusters"] = c.clusters;
    j["fuzzifier"] = c.fuzzifier;
    j["iterations"] = model.iterations_run;
    j["converged"] = model.converged;
    j["rows"] = json::array();
    for (const SweepRow& r : rows) j["rows"].push_back(report::sweep_row_json(r));
    batch.add(c.output, dump(j));
  } else {
    std::ostringstream csv;
    report::write_sweep_csv(rows, csv);
    batch.add(c.output, csv.str());
  }
  batch.commit();
  return kOk;
}

// ---------------------------------------------------------------- segment

struct SegmentOptions {
  CommonOptions common;
  double threshold = 0.4;
  std::vector<double> thresholds;
  std::string report;
};

fs::path series_path(const std::string& output, double t) {
  fs::path p(output);
  const std::string stem = p.stem().string() + "_t" + report::format_double(t);
  return p.replace_filename(stem + (p.has_extension() ? p.extension().string() : ".pgm"));
}

std::size_t black_pixels(const OutcomeSet& outcomes) { return outcomes.ambiguous_count(); }

int cmd_segment(SegmentOptions o) {
  const CommonOptions& c = o.common;
  if (c.input.empty() || c.output.empty()) throw UsageError("--input and --output are required");
  const GrayImage img = load_pgm(c.input);
  const Dataset ds = image_to_dataset(img);
  const FcmModel model = run_fcm(ds, c.fcm());
  const PMatrix p = compute_p_matrix(model.memberships);

  std::vector<double> series = o.thresholds;
  const bool is_series = !series.empty();
  if (!is_series) series.push_back(o.threshold);
  require_sorted(series);

  OutputBatch batch;
  json rep = header("segment");
  rep["width"] = img.width;
  rep["height"] = img.height;
  rep["clusters"] = c.clusters;
  rep["centroid_intensities"] = json::array();
  for (std::size_t i = 0; i < model.centroids.rows(); ++i) {
    rep["centroid_intensities"].push_back(to_intensity(model.centroids(i, 0)));
  }
  rep["images"] = json::array();
  for (double t : series) {
    const OutcomeSet outcomes = classify(model.memberships, p, CertaintyThreshold{t});
    const GrayImage seg = render_segmentation(img, outcomes, model.centroids);
    std::ostringstream bytes;
    write_pgm(seg, bytes);
    const fs::path path = is_series ? series_path(c.output, t) : fs::path(c.output);
    batch.add(path, bytes.str());
    rep["images"].push_back(
        {{"threshold", t}, {"path", path.string()}, {"ambiguous_pixels", black_pixels(outcomes)}});
  }
  if (!o.report.empty()) batch.add(o.report, dump(rep));
  batch.commit();
  return kOk;
}

// -------------------------------------------------------- select-features

struct SelectOptions {
  CommonOptions common;
  std::size_t bins = 10;
  std::size_t top = 0;
};

int cmd_select_features(const SelectOptions& o) {
  const CommonOptions& c = o.common;
  if (c.input.empty() || c.output.empty()) throw UsageError("--input and --output are required");
  const Dataset ds = c.load();
  if (!ds.labels) {
    throw Error(ErrorCode::LabelsRequired,
                "select-features ranks features against labels; pass --label-column <name|index>");
  }
  const std::size_t k = o.top == 0 ? ds.dimension() : o.top;
  const FeatureRanking ranking = select_features(ds, k, o.bins);

  OutputBatch batch;
  if (c.format == "json") {
    json j = header("select-features");
    j["bins"] = o.bins;
    j["classes"] = ranking.classes;
    j["selected"] = ranking.selected;
    j["features"] = json::array();
    for (const FeatureScore& s : ranking.ranked) {
      j["features"].push_back({{"feature_index", s.feature_index},
                               {"feature", s.name},
                               {"su", s.su},
                               {"ru", s.ru_per_class},
                               {"bias", s.bias_per_class}});
    }
    batch.add(c.output, dump(j));
  } else {
    std::ostringstream csv;
    report::write_feature_csv(ranking, csv);
    batch.add(c.output, csv.str());
  }
  batch.commit();
  return kOk;
}

// ---------------------------------------------------------------- privacy

struct PrivacyOptions {
  CommonOptions common;
  double noise_fraction = 0.3;
  std::vector<double> thresholds{0.4, 0.5, 0.6};
  std::size_t repeats = 5;
  std::size_t per_cluster = 100;
  double spread = 0.05;
  std::size_t dims = 2;
};

int cmd_privacy(PrivacyOptions o) {
  CommonOptions& c = o.common;
  if (c.output.empty()) throw UsageError("--output is required");
  if (o.repeats == 0) throw UsageError("--repeats must be >= 1");
  require_sorted(o.thresholds);

  std::optional<Dataset> csv_clean;
  if (!c.input.empty()) csv_clean = c.load();
  const std::vector<FeatureRange> bounds(o.dims, FeatureRange{0.0, 1.0});

  std::vector<double> plain_errors;
  std::vector<std::vector<double>> errors(o.thresholds.size());
  std::vector<std::size_t> flagged(o.thresholds.size(), 0);
  std::vector<std::size_t> ambiguous(o.thresholds.size(), 0);
  std::size_t noise_records = 0;
  for (std::size_t r = 0; r < o.repeats; ++r) {
    const std::uint64_t run_seed = c.seed + r;
    const Dataset clean = csv_clean ? *csv_clean
                                    : make_blobs(c.clusters, o.per_cluster, o.spread, bounds,
                                                 run_seed)
                                          .data;
    FcmConfig cfg = c.fcm();
    cfg.seed = run_seed;
    const PrivacyReport rep = privacy_experiment(clean, o.noise_fraction, cfg, o.thresholds, run_seed);
    noise_records = rep.noise_records;
    plain_errors.push_back(rep.plain_error);
    for (std::size_t t = 0; t < rep.rows.size(); ++t) {
      errors[t].push_back(rep.rows[t].error);
      if (rep.rows[t].flagged) ++flagged[t];
      ambiguous[t] += rep.rows[t].n_ambiguous;
    }
  }

  const ErrorStats plain = error_stats(plain_errors);
  json j = header("privacy");
  j["source"] = csv_clean ? "csv" : "blobs";
  j["clusters"] = c.clusters;
  j["noise_fraction"] = o.noise_fraction;
  j["noise_records"] = noise_records;
  j["repeats"] = o.repeats;
  j["plain"] = {{"errors", plain_errors}, {"mean", plain.mean}, {"variance", plain.variance}};
  j["thresholds"] = json::array();
  for (std::size_t t = 0; t < o.thresholds.size(); ++t) {
    const ErrorStats s = error_stats(errors[t]);
    j["thresholds"].push_back(
        {{"threshold", o.thresholds[t]},
         {"errors", errors[t]},
         {"mean", s.mean},
         {"variance", s.variance},
         {"improvement_percent", plain.mean > 0.0 ? 100.0 * (plain.mean - s.mean) / plain.mean : 0.0},
         {"mean_ambiguous", static_cast<double>(ambiguous[t]) / static_cast<double>(o.repeats)},
         {"flagged_runs", flagged[t]}});
  }

  OutputBatch batch;
  if (c.format == "json") {
    batch.add(c.output, dump(j));
  } else {
    std::ostringstream csv;
    csv << "method,threshold,mean_error,variance,flagged_runs\n";
    csv << "fcm,0," << report::format_double(plain.mean) << ','
        << report::format_double(plain.variance) << ",0\n";
    for (const auto& row : j["thresholds"]) {
      csv << "ad-fcm," << report::format_double(row["threshold"].get<double>()) << ','
          << report::format_double(row["mean"].get<double>()) << ','
          << report::format_double(row["variance"].get<double>()) << ','
          << row["flagged_runs"].get<std::size_t>() << '\n';
    }
    batch.add(c.output, csv.str());
  }
  batch.commit();
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return kUsage;
    case ErrorCode::EmptyCluster:
    case ErrorCode::NoDecidedRecords:
    case ErrorCode::DegenerateGMean:
      return kNumericError;
    default:
      return kDataError;
  }
}

}  // namespace

int run(std::span<const std::string> args) {
  CLI::App app{"Fuzzy C-Means with ambiguity detection"};
  app.name(args.empty() ? "adfcm" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  ClusterOptions cluster;
  auto* cl = app.add_subcommand("cluster", "Cluster records and flag ambiguous ones");
  cl->add_option("--input,-i", cluster.common.input, "Input CSV");
  cl->add_option("--output,-o", cluster.common.output, "Outcome CSV (or JSON with --format json)");
  cl->add_option("--threshold,-t", cluster.threshold, "Certainty threshold")->capture_default_str();
  cl->add_option("--memberships", cluster.memberships,
                 "CSV of precomputed memberships (one row per record); skips FCM");
  cl->add_option("--summary", cluster.summary, "Summary JSON path (default <output>.summary.json)");
  cl->add_option("--export-ambiguous", cluster.export_ambiguous,
                 "Write the ambiguous records to this CSV");
  add_fcm_flags(cl, cluster.common);
  add_table_flags(cl, cluster.common);
  add_format_flag(cl, cluster.common);

  SweepOptions sw;
  auto* sc = app.add_subcommand("sweep", "Evaluate a list of certainty thresholds on one fit");
  sc->add_option("--input,-i", sw.common.input, "Labelled input CSV");
  sc->add_option("--output,-o", sw.common.output, "Report path");
  sc->add_option("--thresholds", sw.thresholds, "Ascending thresholds")
      ->delimiter(',')
      ->capture_default_str();
  add_fcm_flags(sc, sw.common);
  add_table_flags(sc, sw.common);
  add_format_flag(sc, sw.common);

  SegmentOptions seg;
  auto* sg = app.add_subcommand("segment", "Segment a grayscale PGM; ambiguous pixels are black");
  sg->add_option("--input,-i", seg.common.input, "Input PGM (P2 or P5, maxval 255)");
  sg->add_option("--output,-o", seg.common.output,
                 "Output PGM; with --thresholds, one <stem>_t<threshold>.pgm per value");
  sg->add_option("--threshold,-t", seg.threshold, "Certainty threshold")->capture_default_str();
  sg->add_option("--thresholds", seg.thresholds, "Render one image per threshold")->delimiter(',');
  sg->add_option("--report", seg.report, "JSON report with ambiguous pixel counts");
  add_fcm_flags(sg, seg.common);

  SelectOptions sel;
  auto* fs_cmd = app.add_subcommand("select-features", "Rank features by symmetric uncertainty");
  fs_cmd->add_option("--input,-i", sel.common.input, "Labelled input CSV");
  fs_cmd->add_option("--output,-o", sel.common.output, "Score report path");
  fs_cmd->add_option("--bins", sel.bins, "Equal-frequency bins per feature")->capture_default_str();
  fs_cmd->add_option("--top", sel.top, "Number of features to select (default all)");
  add_table_flags(fs_cmd, sel.common);
  add_format_flag(fs_cmd, sel.common);

  PrivacyOptions pv;
  pv.common.clusters = 3;
  pv.common.format = "json";
  auto* pc = app.add_subcommand("privacy", "Center error of FCM vs AD-FCM under uniform noise");
  pc->add_option("--input,-i", pv.common.input, "Clean CSV (default: synthetic blobs)");
  pc->add_option("--output,-o", pv.common.output, "Report path");
  pc->add_option("--noise-fraction", pv.noise_fraction, "Noise records per clean record")
      ->capture_default_str();
  pc->add_option("--thresholds", pv.thresholds, "Ascending thresholds")
      ->delimiter(',')
      ->capture_default_str();
  pc->add_option("--repeats", pv.repeats, "Seeded runs (seed, seed+1, ...)")->capture_default_str();
  pc->add_option("--per-cluster", pv.per_cluster, "Blob points per cluster")->capture_default_str();
  pc->add_option("--spread", pv.spread, "Blob standard deviation")->capture_default_str();
  pc->add_option("--dims", pv.dims, "Blob dimensions")->capture_default_str();
  add_fcm_flags(pc, pv.common);
  add_table_flags(pc, pv.common);
  add_format_flag(pc, pv.common);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (cl->parsed()) return cmd_cluster(cluster);
    if (sc->parsed()) return cmd_sweep(sw);
    if (sg->parsed()) return cmd_segment(seg);
    if (fs_cmd->parsed()) return cmd_select_features(sel);
    if (pc->parsed()) return cmd_privacy(pv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace adfcm::cli
