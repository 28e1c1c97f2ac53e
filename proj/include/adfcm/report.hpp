#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"

#include "adfcm/ambiguity.hpp"
#include "adfcm/eval.hpp"
#include "adfcm/feature_select.hpp"

namespace adfcm::report {

inline constexpr int kSchemaVersion = 1;

/// Columns: record_index,dominant_cluster,certainty,status
void write_outcomes_csv(const OutcomeSet& outcomes, std::ostream& out);

/// Columns: threshold,n,nar,ntr,nfr,nfra,par,pbfra,accuracy
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

/// Columns: rank,feature_index,feature,su,selected, then ru_<class>, bias_<class> per class.
void write_feature_csv(const FeatureRanking& ranking, std::ostream& out);

/// {threshold, n, nar, ntr, nfr, nfra, par, pbfra, accuracy}
nlohmann::json sweep_row_json(const SweepRow& row);

/// Exports the ambiguous records with their original index and certainty.
void write_ambiguous_csv(const AmbiguousRecords& records, std::ostream& out);

std::string format_double(double v);

}  // namespace adfcm::report
