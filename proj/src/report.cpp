#include "panqa/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "panqa/version.hpp"

namespace panqa {

namespace {

using nlohmann::ordered_json;

constexpr const char* kNotApplicable = "reference row: not applicable";

ordered_json cell(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) out += "; ";
        out += flags[i];
    }
    return out;
}

std::string md_cell(const std::optional<double>& v) {
    return v ? format_sig6(*v) : "—";
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? format_sig6(*v) : "";
}

// A flag counts as an error when it explains a missing cell; exclusion
// counters annotate populated cells and the reference rows are blank by
// design.
int count_error_cells(const EvaluationReport& report) {
    int errors = 0;
    for (const SpectralRow& row : report.spectral) {
        for (const std::string& flag : row.flags) {
            if (flag.rfind("reference row", 0) == 0) continue;
            const bool missing = (flag.rfind("snr:", 0) == 0 && !row.snr) ||
                                 (flag.rfind("di:", 0) == 0 && !row.di) ||
                                 (flag.rfind("cc:", 0) == 0 && !row.cc);
            if (missing) ++errors;
        }
    }
    for (const SpatialRow& row : report.spatial) {
        for (const std::string& flag : row.flags) {
            if (flag.rfind("reference row", 0) == 0) continue;
            const bool missing = (flag.rfind("fcc:", 0) == 0 && !row.fcc_band) ||
                                 (flag.rfind("fcc_avg:", 0) == 0 && !row.fcc_avg) ||
                                 (flag.rfind("hpdi:", 0) == 0 && !row.hpdi_abs);
            if (missing) ++errors;
        }
    }
    return errors;
}

void append_flag_list(std::ostringstream& out, const std::string& method,
                      const std::string& band, const std::vector<std::string>& flags) {
    for (const std::string& flag : flags) {
        out << "- " << method << "/" << (band.empty() ? "-" : band) << ": " << flag << "\n";
    }
}

}  // namespace

HpdiVariant parse_hpdi_variant(const std::string& name) {
    if (name == "abs") return HpdiVariant::Abs;
    if (name == "signed") return HpdiVariant::Signed;
    if (name == "both") return HpdiVariant::Both;
    throw Error("unknown HPDI variant '" + name + "' (expected abs|signed|both)");
}

std::string hpdi_variant_name(HpdiVariant v) {
    switch (v) {
        case HpdiVariant::Abs: return "abs";
        case HpdiVariant::Signed: return "signed";
        case HpdiVariant::Both: return "both";
    }
    return "?";
}

SgNormalizer parse_sg_normalizer(const std::string& name) {
    if (name == "printed") return SgNormalizer::Printed;
    if (name == "interior") return SgNormalizer::Interior;
    throw Error("unknown SG normalizer '" + name + "' (expected printed|interior)");
}

std::string sg_normalizer_name(SgNormalizer n) {
    return n == SgNormalizer::Printed ? "printed" : "interior";
}

std::string format_sig6(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string format_full(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

EvaluationReport build_evaluation_report(
    const MultibandImage& reference, const Band& pan,
    const std::vector<std::pair<std::string, MultibandImage>>& fused_groups,
    const EvaluationOptions& options) {
    if (reference.count() == 0) throw Error("evaluate: reference has no bands");
    if (fused_groups.empty()) throw Error("evaluate: no fused groups given");
    if (reference.rows() != pan.rows || reference.cols() != pan.cols) {
        throw Error("evaluate: reference MS is " + std::to_string(reference.rows()) + "x" +
                    std::to_string(reference.cols()) + " but PAN is " +
                    std::to_string(pan.rows) + "x" + std::to_string(pan.cols));
    }

    EvaluationReport report;
    report.scene_id = options.scene_id;
    report.version = kVersion;

    // ORG rows first, as the tables print them: SD/En describe the reference
    // bands themselves, the comparison cells stay blank.
    for (const auto& [name, band] : reference.bands) {
        SpectralRow row;
        row.method_name = "ORG";
        row.band_name = name;
        row.sd = std_dev(band);
        row.en = entropy(band);
        row.flags.push_back(kNotApplicable);
        report.spectral.push_back(std::move(row));
    }
    for (const auto& [method, image] : fused_groups) {
        std::vector<SpectralRow> rows =
            spectral_report(image, reference, method, options.peak);
        for (SpectralRow& row : rows) report.spectral.push_back(std::move(row));
    }

    for (const auto& [method, image] : fused_groups) {
        std::vector<SpatialRow> rows =
            spatial_report(image, pan, method, options.sg_normalizer);
        for (SpatialRow& row : rows) report.spatial.push_back(std::move(row));
    }
    // Reference rows at the bottom, the way the spatial table prints them.
    {
        std::vector<SpatialRow> rows =
            spatial_report(reference, pan, "ORG", options.sg_normalizer);
        for (SpatialRow& row : rows) report.spatial.push_back(std::move(row));
        report.spatial.push_back(pan_spatial_row(pan, options.sg_normalizer));
    }

    report.config = ordered_json{
        {"scene_id", options.scene_id},
        {"peak", options.peak},
        {"hpdi", hpdi_variant_name(options.hpdi)},
        {"sg_normalizer", sg_normalizer_name(options.sg_normalizer)},
        {"bands", reference.names()},
        {"methods", [&] {
             std::vector<std::string> names;
             for (const auto& [method, unused] : fused_groups) names.push_back(method);
             return names;
         }()},
    };
    report.error_cell_count = count_error_cells(report);
    return report;
}

std::string to_json_string(const EvaluationReport& report) {
    ordered_json doc;
    doc["scene_id"] = report.scene_id;
    doc["config"] = report.config;
    doc["spectral"] = ordered_json::array();
    for (const SpectralRow& row : report.spectral) {
        doc["spectral"].push_back(ordered_json{
            {"method", row.method_name},
            {"band", row.band_name},
            {"sd", cell(row.sd)},
            {"en", cell(row.en)},
            {"snr", cell(row.snr)},
            {"nrmse", cell(row.nrmse)},
            {"di", cell(row.di)},
            {"cc", cell(row.cc)},
            {"flags", row.flags},
        });
    }
    doc["spatial"] = ordered_json::array();
    for (const SpatialRow& row : report.spatial) {
        doc["spatial"].push_back(ordered_json{
            {"method", row.method_name},
            {"band", row.band_name},
            {"mg", cell(row.mg)},
            {"sg", cell(row.sg)},
            {"fcc_band", cell(row.fcc_band)},
            {"fcc_avg", cell(row.fcc_avg)},
            {"hpdi_abs", cell(row.hpdi_abs)},
            {"hpdi_signed", cell(row.hpdi_signed)},
            {"excluded", row.excluded_pixels},
            {"flags", row.flags},
        });
    }
    doc["version"] = report.version;
    return doc.dump(2) + "\n";
}

std::string to_csv_spectral(const EvaluationReport& report) {
    std::ostringstream out;
    out << "method,band,sd,en,snr,nrmse,di,cc,excluded,flags\n";
    for (const SpectralRow& row : report.spectral) {
        out << csv_escape(row.method_name) << "," << csv_escape(row.band_name) << ","
            << csv_cell(row.sd) << "," << csv_cell(row.en) << "," << csv_cell(row.snr) << ","
            << csv_cell(row.nrmse) << "," << csv_cell(row.di) << "," << csv_cell(row.cc) << ","
            << row.excluded_pixels << "," << csv_escape(join_flags(row.flags)) << "\n";
    }
    return out.str();
}

std::string to_csv_spatial(const EvaluationReport& report) {
    std::ostringstream out;
    out << "method,band,mg,sg,fcc_band,fcc_avg,hpdi_abs,hpdi_signed,excluded,flags\n";
    for (const SpatialRow& row : report.spatial) {
        out << csv_escape(row.method_name) << "," << csv_escape(row.band_name) << ","
            << csv_cell(row.mg) << "," << csv_cell(row.sg) << "," << csv_cell(row.fcc_band)
            << "," << csv_cell(row.fcc_avg) << "," << csv_cell(row.hpdi_abs) << ","
            << csv_cell(row.hpdi_signed) << "," << row.excluded_pixels << ","
            << csv_escape(join_flags(row.flags)) << "\n";
    }
    return out.str();
}

std::string to_long_csv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "metric,method,band,value\n";
    auto emit = [&](const char* metric, const std::string& method, const std::string& band,
                    const std::optional<double>& v) {
        if (!v) return;
        out << metric << "," << csv_escape(method) << "," << csv_escape(band) << ","
            << format_sig6(*v) << "\n";
    };
    for (const SpectralRow& row : report.spectral) {
        emit("sd", row.method_name, row.band_name, row.sd);
        emit("en", row.method_name, row.band_name, row.en);
        emit("snr", row.method_name, row.band_name, row.snr);
        emit("nrmse", row.method_name, row.band_name, row.nrmse);
        emit("di", row.method_name, row.band_name, row.di);
        emit("cc", row.method_name, row.band_name, row.cc);
    }
    for (const SpatialRow& row : report.spatial) {
        emit("mg", row.method_name, row.band_name, row.mg);
        emit("sg", row.method_name, row.band_name, row.sg);
        emit("fcc_band", row.method_name, row.band_name, row.fcc_band);
        emit("fcc_avg", row.method_name, row.band_name, row.fcc_avg);
        emit("hpdi_abs", row.method_name, row.band_name, row.hpdi_abs);
        emit("hpdi_signed", row.method_name, row.band_name, row.hpdi_signed);
    }
    return out.str();
}

std::string to_markdown(const EvaluationReport& report) {
    HpdiVariant variant = HpdiVariant::Both;
    if (report.config.contains("hpdi")) {
        variant = parse_hpdi_variant(report.config["hpdi"].get<std::string>());
    }

    std::ostringstream out;
    out << "# Evaluation report: " << report.scene_id << "\n\n";

    out << "## Spectral quality\n\n";
    out << "| Method | Band | SD | En | SNR | NRMSE | DI | CC |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const SpectralRow& row : report.spectral) {
        out << "| " << row.method_name << " | " << row.band_name << " | " << md_cell(row.sd)
            << " | " << md_cell(row.en) << " | " << md_cell(row.snr) << " | "
            << md_cell(row.nrmse) << " | " << md_cell(row.di) << " | " << md_cell(row.cc)
            << " |\n";
    }

    out << "\n## Spatial quality\n\n";
    out << "| Method | Band | MG | SG |";
    if (variant != HpdiVariant::Signed) out << " HPDI (abs) |";
    if (variant != HpdiVariant::Abs) out << " HPDI (signed) |";
    out << " FCC |\n";
    out << "|---|---|---|---|";
    if (variant == HpdiVariant::Both) out << "---|";
    out << "---|---|\n";
    for (const SpatialRow& row : report.spatial) {
        out << "| " << row.method_name << " | " << (row.band_name.empty() ? "—" : row.band_name)
            << " | " << md_cell(row.mg) << " | " << md_cell(row.sg) << " |";
        if (variant != HpdiVariant::Signed) out << " " << md_cell(row.hpdi_abs) << " |";
        if (variant != HpdiVariant::Abs) out << " " << md_cell(row.hpdi_signed) << " |";
        out << " " << md_cell(row.fcc_band) << " |\n";
    }

    // FCC averages, one line per method that has one.
    std::vector<std::pair<std::string, double>> averages;
    for (const SpatialRow& row : report.spatial) {
        if (!row.fcc_avg) continue;
        if (averages.empty() || averages.back().first != row.method_name) {
            averages.emplace_back(row.method_name, *row.fcc_avg);
        }
    }
    if (!averages.empty()) {
        out << "\nFCC averages:\n";
        for (const auto& [method, avg] : averages) {
            out << "- " << method << ": " << format_sig6(avg) << "\n";
        }
    }

    std::ostringstream flag_lines;
    for (const SpectralRow& row : report.spectral) {
        append_flag_list(flag_lines, row.method_name, row.band_name, row.flags);
    }
    for (const SpatialRow& row : report.spatial) {
        append_flag_list(flag_lines, row.method_name, row.band_name, row.flags);
    }
    if (!flag_lines.str().empty()) {
        out << "\nFlags:\n" << flag_lines.str();
    }

    out << "\nConfig: `" << report.config.dump() << "`\n";
    out << "\nToolkit version " << report.version << "\n";
    return out.str();
}

}  // namespace panqa
