#include "adfcm/report.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace adfcm::report {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_outcomes_csv(const OutcomeSet& outcomes, std::ostream& out) {
  out << "record_index,dominant_cluster,certainty,status\n";
  for (const RecordOutcome& r : outcomes.records) {
    out << r.record_index << ',' << r.dominant_cluster << ',' << format_double(r.certainty) << ','
        << (r.ambiguous() ? "ambiguous" : "assigned") << '\n';
  }
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "threshold,n,nar,ntr,nfr,nfra,par,pbfra,accuracy\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.threshold) << ',' << r.n << ',' << r.nar << ',' << r.ntr << ','
        << r.nfr << ',' << r.nfra << ',' << format_double(r.par) << ','
        << format_double(r.pbfra) << ',' << (r.accuracy ? format_double(*r.accuracy) : "")
        << '\n';
  }
}

void write_feature_csv(const FeatureRanking& ranking, std::ostream& out) {
  out << "rank,feature_index,feature,su,selected";
  for (const auto& cls : ranking.classes) out << ",ru_" << cls;
  for (const auto& cls : ranking.classes) out << ",bias_" << cls;
  out << '\n';
  for (std::size_t rank = 0; rank < ranking.ranked.size(); ++rank) {
    const FeatureScore& s = ranking.ranked[rank];
    out << rank + 1 << ',' << s.feature_index << ',' << s.name << ',' << format_double(s.su) << ','
        << (rank < ranking.selected.size() ? 1 : 0);
    for (double v : s.ru_per_class) out << ',' << format_double(v);
    for (double v : s.bias_per_class) out << ',' << format_double(v);
    out << '\n';
  }
}

nlohmann::json sweep_row_json(const SweepRow& row) {
  nlohmann::json j;
  j["threshold"] = row.threshold;
  j["n"] = row.n;
  j["nar"] = row.nar;
  j["ntr"] = row.ntr;
  j["nfr"] = row.nfr;
  j["nfra"] = row.nfra;
  j["par"] = row.par;
  j["pbfra"] = row.pbfra;
  j["accuracy"] = row.accuracy ? nlohmann::json(*row.accuracy) : nlohmann::json(nullptr);
  return j;
}

void write_ambiguous_csv(const AmbiguousRecords& amb, std::ostream& out) {
  const Dataset& ds = amb.records;
  out << "record_index,certainty";
  for (const auto& name : ds.feature_names) out << ',' << name;
  if (ds.labels) out << ",label";
  out << '\n';
  for (std::size_t r = 0; r < amb.indices.size(); ++r) {
    out << amb.indices[r] << ',' << format_double(amb.certainty[r]);
    for (double v : ds.records.row(r)) out << ',' << format_double(v);
    if (ds.labels) out << ',' << (*ds.labels)[r];
    out << '\n';
  }
}

}  // namespace adfcm::report
