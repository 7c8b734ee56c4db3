#include "panqa/band.hpp"

#include <algorithm>

namespace panqa {

void check_band(const Band& band, const std::string& context) {
    if (band.rows <= 0 || band.cols <= 0) {
        throw Error(context + ": dimensions must be positive, got " +
                    std::to_string(band.rows) + "x" + std::to_string(band.cols));
    }
    if (band.bit_depth != 6 && band.bit_depth != 8 && band.bit_depth != 16) {
        throw Error(context + ": bit depth must be 6, 8 or 16, got " +
                    std::to_string(band.bit_depth));
    }
    const std::size_t expected =
        static_cast<std::size_t>(band.rows) * static_cast<std::size_t>(band.cols);
    if (band.values.size() != expected) {
        throw Error(context + ": value count " + std::to_string(band.values.size()) +
                    " does not match " + std::to_string(band.rows) + "x" +
                    std::to_string(band.cols));
    }
    const double max_dn = band.max_dn();
    for (int i = 0; i < band.rows; ++i) {
        for (int j = 0; j < band.cols; ++j) {
            const double dn = band.at(i, j);
            if (!(dn >= 0.0 && dn <= max_dn)) {
                throw Error(context + ": DN " + std::to_string(dn) + " at row " +
                            std::to_string(i) + ", col " + std::to_string(j) +
                            " outside [0, " + std::to_string(max_dn) + "]");
            }
        }
    }
}

void validate_pair(const Band& a, const Band& b) {
    if (!a.same_shape(b)) {
        throw Error("dimension mismatch: " + std::to_string(a.rows) + "x" +
                    std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                    std::to_string(b.cols));
    }
}

void MultibandImage::add(std::string name, Band band) {
    for (const auto& [existing, unused] : bands) {
        if (existing == name) {
            throw Error("duplicate band name '" + name + "'");
        }
    }
    if (!bands.empty()) {
        const Band& first = bands.front().second;
        if (!first.same_shape(band)) {
            throw Error("band '" + name + "' is " + std::to_string(band.rows) + "x" +
                        std::to_string(band.cols) + " but image is " +
                        std::to_string(first.rows) + "x" + std::to_string(first.cols));
        }
        if (first.bit_depth != band.bit_depth) {
            throw Error("band '" + name + "' has bit depth " +
                        std::to_string(band.bit_depth) + " but image has " +
                        std::to_string(first.bit_depth));
        }
    }
    bands.emplace_back(std::move(name), std::move(band));
}

const Band* MultibandImage::find(const std::string& name) const {
    for (const auto& [existing, band] : bands) {
        if (existing == name) return &band;
    }
    return nullptr;
}

std::vector<std::string> MultibandImage::names() const {
    std::vector<std::string> out;
    out.reserve(bands.size());
    for (const auto& [name, unused] : bands) out.push_back(name);
    return out;
}

Band upsample_nearest(const Band& src, int target_rows, int target_cols) {
    if (src.rows <= 0 || src.cols <= 0) {
        throw Error("upsample: source band is empty");
    }
    if (target_rows < src.rows || target_cols < src.cols ||
        target_rows % src.rows != 0 || target_cols % src.cols != 0) {
        throw Error("upsample: target " + std::to_string(target_rows) + "x" +
                    std::to_string(target_cols) + " is not an integer multiple of source " +
                    std::to_string(src.rows) + "x" + std::to_string(src.cols));
    }
    const int scale_r = target_rows / src.rows;
    const int scale_c = target_cols / src.cols;
    Band out(target_rows, target_cols, src.bit_depth);
    for (int i = 0; i < target_rows; ++i) {
        for (int j = 0; j < target_cols; ++j) {
            out.at(i, j) = src.at(i / scale_r, j / scale_c);
        }
    }
    return out;
}

MultibandImage upsample_nearest(const MultibandImage& src, int target_rows, int target_cols) {
    MultibandImage out;
    for (const auto& [name, band] : src.bands) {
        out.add(name, upsample_nearest(band, target_rows, target_cols));
    }
    return out;
}

Band rescale_bit_depth(const Band& src, int target_depth) {
    if (target_depth != 6 && target_depth != 8 && target_depth != 16) {
        throw Error("rescale: bit depth must be 6, 8 or 16, got " +
                    std::to_string(target_depth));
    }
    Band out(src.rows, src.cols, target_depth);
    const double gain = (static_cast<double>((1 << target_depth) - 1)) / src.max_dn();
    for (std::size_t k = 0; k < src.values.size(); ++k) {
        out.values[k] = std::clamp(round_half_up(src.values[k] * gain), 0.0, out.max_dn());
    }
    return out;
}

}  // namespace panqa
