#include "panqa/spectral.hpp"

#include <cmath>
#include <vector>

namespace panqa {

namespace {

void require_non_empty(const Band& band, const char* metric) {
    if (band.rows <= 0 || band.cols <= 0 || band.values.empty()) {
        throw Error(std::string(metric) + ": band is empty");
    }
}

}  // namespace

double std_dev(const Band& band) {
    require_non_empty(band, "std_dev");
    const double n = static_cast<double>(band.pixel_count());
    // Work on offsets from the first pixel: integer-valued bands then keep
    // bit-identical results under constant shifts.
    const double anchor = band.values.front();
    double sum = 0.0;
    for (double v : band.values) sum += v - anchor;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : band.values) {
        const double d = (v - anchor) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / n);
}

double entropy(const Band& band) {
    require_non_empty(band, "entropy");
    const long bins = 1L << band.bit_depth;
    std::vector<long> histogram(static_cast<std::size_t>(bins), 0);
    for (double v : band.values) {
        long bin = std::llround(v);
        if (bin < 0) bin = 0;
        if (bin >= bins) bin = bins - 1;
        ++histogram[static_cast<std::size_t>(bin)];
    }
    const double total = static_cast<double>(band.pixel_count());
    double en = 0.0;
    for (long count : histogram) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / total;
        en -= p * std::log2(p);
    }
    return en;
}

double snr(const Band& fused, const Band& reference) {
    validate_pair(fused, reference);
    double signal = 0.0;
    double noise = 0.0;
    for (std::size_t k = 0; k < fused.values.size(); ++k) {
        const double f = fused.values[k];
        const double d = f - reference.values[k];
        signal += f * f;
        noise += d * d;
    }
    if (noise == 0.0) {
        throw Error("identical images (zero noise denominator)");
    }
    return std::sqrt(signal / noise);
}

DeviationResult deviation_index(const Band& fused, const Band& reference) {
    validate_pair(fused, reference);
    DeviationResult result;
    double sum = 0.0;
    long included = 0;
    for (std::size_t k = 0; k < fused.values.size(); ++k) {
        const double m = reference.values[k];
        if (m == 0.0) {
            ++result.excluded;
            continue;
        }
        sum += std::abs(fused.values[k] - m) / m;
        ++included;
    }
    if (included == 0) {
        throw Error("all reference pixels are zero");
    }
    result.di = sum / static_cast<double>(included);
    return result;
}

double correlation(const Band& fused, const Band& reference) {
    validate_pair(fused, reference);
    require_non_empty(fused, "correlation");
    const double n = static_cast<double>(fused.pixel_count());

    double sum_f = 0.0, sum_m = 0.0;
    for (std::size_t k = 0; k < fused.values.size(); ++k) {
        sum_f += fused.values[k];
        sum_m += reference.values[k];
    }
    const double mean_f = sum_f / n;
    const double mean_m = sum_m / n;

    double sff = 0.0, smm = 0.0, sfm = 0.0;
    for (std::size_t k = 0; k < fused.values.size(); ++k) {
        const double df = fused.values[k] - mean_f;
        const double dm = reference.values[k] - mean_m;
        sff += df * df;
        smm += dm * dm;
        sfm += df * dm;
    }
    if (sff == 0.0 || smm == 0.0) {
        throw Error("undefined correlation: constant band (zero variance)");
    }
    // Bitwise-equal inputs correlate at exactly 1; the arithmetic path can
    // land one ulp off.
    if (fused.values == reference.values) return 1.0;
    return sfm / (std::sqrt(sff) * std::sqrt(smm));
}

double nrmse(const Band& fused, const Band& reference, double peak) {
    validate_pair(fused, reference);
    if (!(peak > 0.0)) throw Error("nrmse: peak must be positive");
    double ss = 0.0;
    for (std::size_t k = 0; k < fused.values.size(); ++k) {
        const double d = fused.values[k] - reference.values[k];
        ss += d * d;
    }
    const double n = static_cast<double>(fused.pixel_count());
    return std::sqrt(ss / (n * peak * peak));
}

std::vector<SpectralRow> spectral_report(const MultibandImage& fused,
                                         const MultibandImage& reference,
                                         const std::string& method_name, double peak) {
    if (fused.names() != reference.names()) {
        throw Error("spectral_report: band sets differ between fused and reference");
    }
    if (fused.rows() != reference.rows() || fused.cols() != reference.cols()) {
        throw Error("spectral_report: dimension mismatch between fused and reference");
    }

    std::vector<SpectralRow> rows;
    rows.reserve(fused.count());
    for (std::size_t b = 0; b < fused.count(); ++b) {
        const auto& [band_name, f] = fused.bands[b];
        const Band& m = reference.bands[b].second;

        SpectralRow row;
        row.method_name = method_name;
        row.band_name = band_name;
        row.sd = std_dev(f);
        row.en = entropy(f);
        try {
            row.snr = snr(f, m);
        } catch (const Error& e) {
            row.flags.push_back(std::string("snr: ") + e.what());
        }
        row.nrmse = nrmse(f, m, peak);
        try {
            const DeviationResult di = deviation_index(f, m);
            row.di = di.di;
            row.excluded_pixels = di.excluded;
            if (di.excluded > 0) {
                row.flags.push_back("di: excluded " + std::to_string(di.excluded) +
                                    " zero-reference pixels");
            }
        } catch (const Error& e) {
            row.flags.push_back(std::string("di: ") + e.what());
        }
        try {
            row.cc = correlation(f, m);
        } catch (const Error& e) {
            row.flags.push_back(std::string("cc: ") + e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace panqa
