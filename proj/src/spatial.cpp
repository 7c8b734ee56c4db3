#include "panqa/spatial.hpp"

#include <cmath>

namespace panqa {

namespace {

void require_min_size(const Band& band, int min_rows, int min_cols, const char* metric) {
    if (band.rows < min_rows || band.cols < min_cols) {
        throw Error(std::string(metric) + ": band " + std::to_string(band.rows) + "x" +
                    std::to_string(band.cols) + " is smaller than " +
                    std::to_string(min_rows) + "x" + std::to_string(min_cols));
    }
}

double convolve_at(const Band& band, int i, int j, const Kernel3& k) {
    double acc = 0.0;
    for (int r = -1; r <= 1; ++r) {
        for (int c = -1; c <= 1; ++c) {
            acc += k.at(r + 1, c + 1) * band.at(i + r, j + c);
        }
    }
    return acc;
}

// Pearson correlation restricted to interior pixels of two filtered bands.
double interior_correlation(const Band& a, const Band& b) {
    validate_pair(a, b);
    const long n = static_cast<long>(a.rows - 2) * (a.cols - 2);
    double sum_a = 0.0, sum_b = 0.0;
    for (int i = 1; i < a.rows - 1; ++i) {
        for (int j = 1; j < a.cols - 1; ++j) {
            sum_a += a.at(i, j);
            sum_b += b.at(i, j);
        }
    }
    const double mean_a = sum_a / static_cast<double>(n);
    const double mean_b = sum_b / static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    bool identical = true;
    for (int i = 1; i < a.rows - 1; ++i) {
        for (int j = 1; j < a.cols - 1; ++j) {
            const double da = a.at(i, j) - mean_a;
            const double db = b.at(i, j) - mean_b;
            saa += da * da;
            sbb += db * db;
            sab += da * db;
            identical = identical && a.at(i, j) == b.at(i, j);
        }
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw Error("undefined correlation: filtered interior is constant");
    }
    if (identical) return 1.0;  // exact for bitwise-equal interiors
    return sab / (std::sqrt(saa) * std::sqrt(sbb));
}

}  // namespace

double Kernel3::sum() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

double mean_gradient(const Band& band) {
    require_min_size(band, 2, 2, "mean_gradient");
    double acc = 0.0;
    for (int i = 0; i + 1 < band.rows; ++i) {
        for (int j = 0; j + 1 < band.cols; ++j) {
            const double dx = band.at(i + 1, j) - band.at(i, j);
            const double dy = band.at(i, j + 1) - band.at(i, j);
            acc += std::sqrt((dx * dx + dy * dy) / 2.0);
        }
    }
    return acc / (static_cast<double>(band.rows - 1) * (band.cols - 1));
}

double sobel_gradient(const Band& band, SgNormalizer normalizer) {
    require_min_size(band, 3, 3, "sobel_gradient");
    double acc = 0.0;
    for (int i = 1; i < band.rows - 1; ++i) {
        for (int j = 1; j < band.cols - 1; ++j) {
            const double gx = convolve_at(band, i, j, kernels::sobel_x);
            const double gy = convolve_at(band, i, j, kernels::sobel_y);
            acc += std::sqrt((gx * gx + gy * gy) / 2.0);
        }
    }
    const double denom =
        normalizer == SgNormalizer::Printed
            ? static_cast<double>(band.rows - 1) * (band.cols - 1)
            : static_cast<double>(band.rows - 2) * (band.cols - 2);
    return acc / denom;
}

Band laplacian_filter(const Band& band) {
    require_min_size(band, 3, 3, "laplacian_filter");
    Band out(band.rows, band.cols, band.bit_depth);  // depth kept for bookkeeping only
    for (int i = 1; i < band.rows - 1; ++i) {
        for (int j = 1; j < band.cols - 1; ++j) {
            out.at(i, j) = convolve_at(band, i, j, kernels::laplacian);
        }
    }
    return out;
}

FccResult fcc(const MultibandImage& fused, const Band& pan) {
    if (fused.count() == 0) throw Error("fcc: no bands");
    const Band pan_hp = laplacian_filter(pan);
    FccResult result;
    double sum = 0.0;
    for (const auto& [name, band] : fused.bands) {
        validate_pair(band, pan);
        const double r = interior_correlation(laplacian_filter(band), pan_hp);
        result.per_band.push_back(r);
        sum += r;
    }
    result.average = sum / static_cast<double>(result.per_band.size());
    return result;
}

HpdiResult hpdi(const Band& fused_band, const Band& pan) {
    validate_pair(fused_band, pan);
    const Band f_hp = laplacian_filter(fused_band);
    const Band p_hp = laplacian_filter(pan);

    HpdiResult result;
    double sum_abs = 0.0;
    double sum_signed = 0.0;
    long included = 0;
    for (int i = 1; i < pan.rows - 1; ++i) {
        for (int j = 1; j < pan.cols - 1; ++j) {
            const double p = p_hp.at(i, j);
            if (p == 0.0) {
                ++result.excluded;
                continue;
            }
            const double diff = f_hp.at(i, j) - p;
            sum_abs += std::abs(diff) / std::abs(p);
            sum_signed += diff / p;
            ++included;
        }
    }
    if (included == 0) {
        throw Error("all filtered PAN interior pixels are zero");
    }
    result.absolute = sum_abs / static_cast<double>(included);
    result.signed_value = sum_signed / static_cast<double>(included);
    return result;
}

std::vector<SpatialRow> spatial_report(const MultibandImage& fused, const Band& pan,
                                       const std::string& method_name,
                                       SgNormalizer normalizer) {
    if (fused.count() == 0) throw Error("spatial_report: no bands");
    for (const auto& [name, band] : fused.bands) validate_pair(band, pan);

    // Per-band filtered correlations first; the average is only defined when
    // every band has one.
    const Band pan_hp = laplacian_filter(pan);
    std::vector<std::optional<double>> fcc_cells(fused.count());
    std::vector<std::string> fcc_errors(fused.count());
    double fcc_sum = 0.0;
    bool fcc_complete = true;
    for (std::size_t b = 0; b < fused.count(); ++b) {
        try {
            const double r = interior_correlation(laplacian_filter(fused.bands[b].second), pan_hp);
            fcc_cells[b] = r;
            fcc_sum += r;
        } catch (const Error& e) {
            fcc_errors[b] = e.what();
            fcc_complete = false;
        }
    }
    const double fcc_average = fcc_complete ? fcc_sum / static_cast<double>(fused.count()) : 0.0;

    std::vector<SpatialRow> rows;
    rows.reserve(fused.count());
    for (std::size_t b = 0; b < fused.count(); ++b) {
        const auto& [band_name, band] = fused.bands[b];
        SpatialRow row;
        row.method_name = method_name;
        row.band_name = band_name;
        row.mg = mean_gradient(band);
        row.sg = sobel_gradient(band, normalizer);
        if (fcc_cells[b]) {
            row.fcc_band = fcc_cells[b];
        } else {
            row.flags.push_back("fcc: " + fcc_errors[b]);
        }
        if (fcc_complete) {
            row.fcc_avg = fcc_average;
        } else if (fcc_cells[b]) {
            row.flags.push_back("fcc_avg: undefined, another band has no FCC");
        }
        try {
            const HpdiResult h = hpdi(band, pan);
            row.hpdi_abs = h.absolute;
            row.hpdi_signed = h.signed_value;
            row.excluded_pixels = h.excluded;
            if (h.excluded > 0) {
                row.flags.push_back("hpdi: excluded " + std::to_string(h.excluded) +
                                    " zero filtered-PAN pixels");
            }
        } catch (const Error& e) {
            row.flags.push_back(std::string("hpdi: ") + e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

SpatialRow pan_spatial_row(const Band& pan, SgNormalizer normalizer) {
    SpatialRow row;
    row.method_name = "PAN";
    row.mg = mean_gradient(pan);
    row.sg = sobel_gradient(pan, normalizer);
    row.flags.push_back("reference row: FCC/HPDI not applicable");
    return row;
}

}  // namespace panqa
