#pragma once

#include <optional>
#include <string>
#include <vector>

#include "panqa/band.hpp"

namespace panqa {

// Population standard deviation (divide by the pixel count, not count - 1).
double std_dev(const Band& band);

// Shannon entropy in bits over 2^bit_depth histogram bins. DNs are rounded
// to the nearest integer and clamped into range before binning; empty bins
// contribute nothing.
double entropy(const Band& band);

// sqrt( sum F^2 / sum (F - M)^2 ). The numerator is the fused image's own
// energy; that convention is kept as-is and documented in the README.
// Identical inputs have a zero noise denominator and are reported as an
// error rather than infinity.
double snr(const Band& fused, const Band& reference);

struct DeviationResult {
    double di = 0.0;
    long excluded = 0;  // reference pixels equal to zero, skipped
};

// Mean of |F - M| / M over pixels where M != 0. Zero-reference pixels are
// excluded from the mean and counted instead of epsilon-clamped.
DeviationResult deviation_index(const Band& fused, const Band& reference);

// Pearson correlation. Errors out when either band is constant.
double correlation(const Band& fused, const Band& reference);

// sqrt( sum (F - M)^2 / (n*m*peak^2) ). peak defaults to 255 and must be
// chosen explicitly for 6- or 16-bit data.
double nrmse(const Band& fused, const Band& reference, double peak = 255.0);

// One row of the spectral table. Cells that could not be computed are empty
// and explained by an entry in flags ("metric: reason").
struct SpectralRow {
    std::string method_name;
    std::string band_name;
    std::optional<double> sd;
    std::optional<double> en;
    std::optional<double> snr;
    std::optional<double> nrmse;
    std::optional<double> di;
    std::optional<double> cc;
    long excluded_pixels = 0;
    std::vector<std::string> flags;
};

// One SpectralRow per band, in band order. SD/En describe the fused band;
// the remaining metrics compare it against the reference. Per-cell errors
// (e.g. SNR on identical bands) become flags, not exceptions.
std::vector<SpectralRow> spectral_report(const MultibandImage& fused,
                                         const MultibandImage& reference,
                                         const std::string& method_name,
                                         double peak = 255.0);

}  // namespace panqa
