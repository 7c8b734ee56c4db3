#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "panqa/band.hpp"
#include "panqa/spatial.hpp"
#include "panqa/spectral.hpp"

namespace panqa {

// Which high-pass deviation reading the human-readable tables show; the JSON
// and CSV always carry both.
enum class HpdiVariant { Abs, Signed, Both };

HpdiVariant parse_hpdi_variant(const std::string& name);  // abs|signed|both
std::string hpdi_variant_name(HpdiVariant v);
SgNormalizer parse_sg_normalizer(const std::string& name);  // printed|interior
std::string sg_normalizer_name(SgNormalizer n);

struct EvaluationOptions {
    double peak = 255.0;
    HpdiVariant hpdi = HpdiVariant::Both;
    SgNormalizer sg_normalizer = SgNormalizer::Printed;
    std::string scene_id = "scene";
};

// Everything one evaluation run produced. `config` echoes the options and
// (when run through the CLI) the input paths, enough to reproduce the run
// bit-identically; timestamps are deliberately absent.
struct EvaluationReport {
    std::string scene_id;
    nlohmann::ordered_json config;
    std::vector<SpectralRow> spectral;
    std::vector<SpatialRow> spatial;
    std::string version;
    // Cells that failed with a reason (excludes by-design blanks on the
    // reference rows). Nonzero maps to CLI exit code 2.
    int error_cell_count = 0;
};

// Evaluates every fused group against the reference MS (already at PAN size)
// and assembles reference rows: an ORG row per band (SD/En in the spectral
// table, full spatial metrics in the spatial table) plus an MG/SG-only PAN
// row. Groups appear in the order given.
EvaluationReport build_evaluation_report(
    const MultibandImage& reference, const Band& pan,
    const std::vector<std::pair<std::string, MultibandImage>>& fused_groups,
    const EvaluationOptions& options);

// Emitters. All of them format deterministically: JSON keeps full precision,
// the human-readable formats round to 6 significant digits.
std::string to_json_string(const EvaluationReport& report);
std::string to_markdown(const EvaluationReport& report);
std::string to_csv_spectral(const EvaluationReport& report);
std::string to_csv_spatial(const EvaluationReport& report);
// Long format (metric,method,band,value), one line per populated cell, for
// external bar-chart tooling.
std::string to_long_csv(const EvaluationReport& report);

std::string format_sig6(double value);
std::string format_full(double value);

}  // namespace panqa
