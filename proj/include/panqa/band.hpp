#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace panqa {

// Every expected failure (bad file, mismatched inputs, degenerate metric)
// surfaces as panqa::Error with a message naming the offender.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A single raster band: a row-major grid of digital numbers (DN).
// DNs are stored as doubles so fusion arithmetic can stay fractional;
// quantization to integers happens only at the PGM boundary.
struct Band {
    int rows = 0;
    int cols = 0;
    int bit_depth = 8;  // one of 6, 8, 16
    std::vector<double> values;  // rows * cols, row-major

    Band() = default;
    Band(int rows_, int cols_, int bit_depth_ = 8, double fill = 0.0)
        : rows(rows_), cols(cols_), bit_depth(bit_depth_),
          values(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), fill) {}

    double max_dn() const { return static_cast<double>((1 << bit_depth) - 1); }
    std::size_t pixel_count() const { return values.size(); }

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }

    bool same_shape(const Band& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

// Structural + range check: values.size() == rows*cols, all DN in
// [0, 2^bit_depth - 1], bit_depth one of {6, 8, 16}. Filtered bands
// (which legitimately go negative) are not passed through this.
void check_band(const Band& band, const std::string& context = "band");

// Registration precondition for every two-image metric: dimensions must
// match exactly. Reports both shapes on failure.
void validate_pair(const Band& a, const Band& b);

// Ordered, uniquely named set of equally sized bands.
struct MultibandImage {
    std::vector<std::pair<std::string, Band>> bands;

    // Rejects duplicate names and shape/depth mismatches with the first band.
    void add(std::string name, Band band);

    std::size_t count() const { return bands.size(); }
    int rows() const { return bands.empty() ? 0 : bands.front().second.rows; }
    int cols() const { return bands.empty() ? 0 : bands.front().second.cols; }
    int bit_depth() const { return bands.empty() ? 8 : bands.front().second.bit_depth; }

    const Band* find(const std::string& name) const;
    std::vector<std::string> names() const;
};

// Matched evaluation inputs: high-res PAN, low-res MS, the MS upsampled to
// PAN size, and (for synthetic scenes) the truth the MS was degraded from.
struct SceneBundle {
    Band pan;
    MultibandImage ms_low;
    MultibandImage ms_up;
    std::optional<MultibandImage> truth;
};

// Nearest-neighbor upsampling by block replication. Target dimensions must
// be integer multiples of the source; anything else is rejected.
Band upsample_nearest(const Band& src, int target_rows, int target_cols);
MultibandImage upsample_nearest(const MultibandImage& src, int target_rows, int target_cols);

// Linear DN rescale between bit depths: dn * (2^target - 1) / (2^source - 1),
// rounded half up. Never applied implicitly anywhere in the toolkit; callers
// mixing depths (e.g. 6-bit PAN against 8-bit MS) opt in here.
Band rescale_bit_depth(const Band& src, int target_depth);

// Rounding rule used for every DN quantization (PGM output, synthetic scenes).
inline double round_half_up(double x) { return std::floor(x + 0.5); }

}  // namespace panqa
