#ifndef FACET_REPORT_HPP
#define FACET_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "facet/eval.hpp"
#include "facet/pipeline.hpp"

namespace facet {

/// Key/value lines written next to every output file.
struct Provenance {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value);
};

/// Tool version, config hash and master seed; every output carries at least these.
Provenance base_provenance(std::uint64_t config_hash, std::uint64_t seed, const std::string& seed_source);
Provenance experiment_provenance(const ExperimentConfig& config, const GeomConfig& geom);

void write_provenance(const Provenance& provenance, std::ostream& out);
/// Writes `<path>.provenance.txt`.
void write_provenance_sidecar(const Provenance& provenance, const std::filesystem::path& path);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& value);

inline constexpr const char* kReportHeader = "attribute,source,metric,mean,stddev,n_repeats";

/// Long-format report: per attribute the split-half row (source "human"),
/// then test Pearson and out-of-range fraction per feature source. Failed
/// cells print NA with n_repeats 0.
void write_report_csv(const EvalReport& report, std::ostream& out);
/// attribute,baseline1,baseline2,model with NA for missing or failed cells.
void write_table1_csv(const EvalReport& report, std::ostream& out);
/// attribute,source,error for every failed cell.
void write_failures_csv(const EvalReport& report, std::ostream& out);
/// Baseline-I rows in the report schema.
void write_consistency_csv(const std::vector<ConsistencyResult>& results, std::ostream& out);

/// Square matrix with attribute names as header row and first column.
void write_heatmap_csv(const AttributeHeatmap& heatmap, std::ostream& out);

/// Diverging scale: -1 -> #2166ac, 0 -> #ffffff, +1 -> #b2182b, linear in
/// RGB on each side; values are clamped to [-1, 1].
std::string diverging_color(double value);

/// Self-contained SVG: one cell per attribute pair, labels, a colour legend,
/// and the provenance in a <desc> element.
void write_heatmap_svg(const AttributeHeatmap& heatmap, const std::string& title, const Provenance& provenance,
                       std::ostream& out);

/// Writes every evaluation output into `dir` and returns the file names in
/// the order written.
std::vector<std::string> write_eval_outputs(const EvalReport& report, const Provenance& provenance,
                                            const std::filesystem::path& dir);

}  // namespace facet

#endif
