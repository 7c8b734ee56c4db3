#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "panqa/band.hpp"

namespace panqa {

// 3x3 convolution stencil, row-major weights.
struct Kernel3 {
    std::array<double, 9> w;
    double at(int r, int c) const { return w[static_cast<std::size_t>(r) * 3 + c]; }
    double sum() const;
};

namespace kernels {

// Horizontal-edge template: positive row above, negative row below.
inline constexpr Kernel3 sobel_x{{1, 2, 1, 0, 0, 0, -1, -2, -1}};
// Vertical-edge template: positive column right, negative column left.
inline constexpr Kernel3 sobel_y{{-1, 0, 1, -2, 0, 2, -1, 0, 1}};
// High-pass mask: center 8, eight neighbors -1.
inline constexpr Kernel3 laplacian{{-1, -1, -1, -1, 8, -1, -1, -1, -1}};

}  // namespace kernels

// Mean of sqrt((dx^2 + dy^2)/2) over forward differences
// dx = f(i+1,j) - f(i,j), dy = f(i,j+1) - f(i,j), averaged over the
// (rows-1)(cols-1) pixels where both differences exist.
double mean_gradient(const Band& band);

// The denominator of the Sobel mean. `Printed` keeps (rows-1)(cols-1) even
// though only (rows-2)(cols-2) interior pixels contribute; `Interior`
// divides by the actual contributing count.
enum class SgNormalizer { Printed, Interior };

// Mean of sqrt((Gx^2 + Gy^2)/2) over interior pixels, Gx/Gy from the Sobel
// templates above. Borders are excluded, not padded.
double sobel_gradient(const Band& band, SgNormalizer normalizer = SgNormalizer::Printed);

// Applies the 8/-1 high-pass mask to interior pixels. Border pixels are set
// to 0 and carry no meaning; consumers must restrict themselves to the
// interior. Output values are signed, so the DN range invariant is waived.
Band laplacian_filter(const Band& band);

struct FccResult {
    std::vector<double> per_band;
    double average = 0.0;
};

// Correlation between the high-pass-filtered fused bands and the high-pass-
// filtered PAN, over interior pixels only; `average` is the mean over bands.
FccResult fcc(const MultibandImage& fused, const Band& pan);

struct HpdiResult {
    double absolute = 0.0;      // mean |F^ - P^| / |P^|
    double signed_value = 0.0;  // mean (F^ - P^) / P^, the formula as printed
    long excluded = 0;          // interior pixels with P^ == 0
};

// High-pass deviation index between a fused band and the PAN: both are
// Laplacian-filtered, then the deviation is taken over interior pixels with
// nonzero filtered PAN. Filtered output is signed, so two readings are
// reported; the absolute variant stays a nonnegative deviation.
HpdiResult hpdi(const Band& fused_band, const Band& pan);

// One row of the spatial table. fcc_avg repeats the method-level average on
// every band row of that method.
struct SpatialRow {
    std::string method_name;
    std::string band_name;
    std::optional<double> mg;
    std::optional<double> sg;
    std::optional<double> fcc_band;
    std::optional<double> fcc_avg;
    std::optional<double> hpdi_abs;
    std::optional<double> hpdi_signed;
    long excluded_pixels = 0;
    std::vector<std::string> flags;
};

// One SpatialRow per fused band. Per-cell failures (constant filtered
// interior, all-zero filtered PAN) become flags, and the remaining cells are
// still produced.
std::vector<SpatialRow> spatial_report(const MultibandImage& fused, const Band& pan,
                                       const std::string& method_name,
                                       SgNormalizer normalizer = SgNormalizer::Printed);

// MG/SG-only row for the PAN itself, mirroring the reference row of the
// report tables.
SpatialRow pan_spatial_row(const Band& pan, SgNormalizer normalizer = SgNormalizer::Printed);

}  // namespace panqa
