#include "panqa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace panqa {

namespace {

// Engine output is mapped to [0,1) by hand; std::uniform_real_distribution
// is not guaranteed to produce the same stream across standard libraries.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// One octave of value noise: random lattice values, bilinear interpolation.
// Values are centered around zero in [-0.5, 0.5).
std::vector<double> value_noise(int rows, int cols, int cell, std::uint64_t seed) {
    const int lat_rows = rows / cell + 2;
    const int lat_cols = cols / cell + 2;
    std::mt19937_64 rng(seed);
    std::vector<double> lattice(static_cast<std::size_t>(lat_rows) * lat_cols);
    for (double& v : lattice) v = next_unit(rng) - 0.5;

    std::vector<double> out(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i) {
        const int li = i / cell;
        const double fi = static_cast<double>(i % cell) / cell;
        for (int j = 0; j < cols; ++j) {
            const int lj = j / cell;
            const double fj = static_cast<double>(j % cell) / cell;
            const double v00 = lattice[static_cast<std::size_t>(li) * lat_cols + lj];
            const double v01 = lattice[static_cast<std::size_t>(li) * lat_cols + lj + 1];
            const double v10 = lattice[static_cast<std::size_t>(li + 1) * lat_cols + lj];
            const double v11 = lattice[static_cast<std::size_t>(li + 1) * lat_cols + lj + 1];
            const double top = v00 + (v01 - v00) * fj;
            const double bottom = v10 + (v11 - v10) * fj;
            out[static_cast<std::size_t>(i) * cols + j] = top + (bottom - top) * fi;
        }
    }
    return out;
}

// Octave stack: cell size halves and amplitude decays each octave, starting
// at a quarter of the larger dimension so the energy sits in low frequencies.
std::vector<double> octave_texture(int rows, int cols, int octaves, std::uint64_t seed) {
    std::vector<double> acc(static_cast<std::size_t>(rows) * cols, 0.0);
    const int base_cell = std::max(4, std::max(rows, cols) / 4);
    double amplitude = 1.0;
    double amplitude_sum = 0.0;
    for (int o = 0; o < octaves; ++o) {
        const int cell = std::max(2, base_cell >> o);
        const std::vector<double> layer =
            value_noise(rows, cols, cell, mix_seed(seed, static_cast<std::uint64_t>(o)));
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += amplitude * layer[k];
        amplitude_sum += amplitude;
        amplitude *= 0.55;
    }
    for (double& v : acc) v /= amplitude_sum;  // back to roughly [-0.5, 0.5]
    return acc;
}

Band quantize(const Band& real_band) {
    Band out = real_band;
    const double max_dn = out.max_dn();
    for (double& v : out.values) v = std::clamp(round_half_up(v), 0.0, max_dn);
    return out;
}

Band block_average(const Band& src, int scale) {
    Band out(src.rows / scale, src.cols / scale, src.bit_depth);
    for (int i = 0; i < out.rows; ++i) {
        for (int j = 0; j < out.cols; ++j) {
            double acc = 0.0;
            for (int r = 0; r < scale; ++r) {
                for (int c = 0; c < scale; ++c) {
                    acc += src.at(i * scale + r, j * scale + c);
                }
            }
            out.at(i, j) = acc / (static_cast<double>(scale) * scale);
        }
    }
    return out;
}

}  // namespace

SceneBundle synth_scene(const SynthSpec& spec) {
    if (spec.rows < 2 || spec.cols < 2) {
        throw Error("synth: dimensions must be at least 2x2");
    }
    if (spec.scale < 2) {
        throw Error("synth: scale must be >= 2, got " + std::to_string(spec.scale));
    }
    if (spec.rows % spec.scale != 0 || spec.cols % spec.scale != 0) {
        throw Error("synth: " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                    " is not divisible by scale " + std::to_string(spec.scale));
    }
    if (spec.texture_octaves < 1) {
        throw Error("synth: texture_octaves must be >= 1");
    }
    if (spec.bit_depth != 6 && spec.bit_depth != 8 && spec.bit_depth != 16) {
        throw Error("synth: bit depth must be 6, 8 or 16");
    }

    const std::vector<double> shared =
        octave_texture(spec.rows, spec.cols, spec.texture_octaves, mix_seed(spec.seed, 100));

    // Per-band coloring: a shared structure plus a weaker band-specific
    // layer, mapped into the middle of the DN range so derived products
    // stay clear of the clamp boundaries.
    const double max_dn = static_cast<double>((1 << spec.bit_depth) - 1);
    const char* names[3] = {"r", "g", "b"};
    const double offsets[3] = {0.48, 0.50, 0.52};

    MultibandImage truth;
    for (int b = 0; b < 3; ++b) {
        const std::vector<double> own = octave_texture(
            spec.rows, spec.cols, spec.texture_octaves,
            mix_seed(spec.seed, 200 + static_cast<std::uint64_t>(b)));
        Band band(spec.rows, spec.cols, spec.bit_depth);
        for (std::size_t k = 0; k < band.values.size(); ++k) {
            const double v = offsets[b] + 0.62 * shared[k] + 0.16 * own[k];
            band.values[k] = v * max_dn;
        }
        truth.add(names[b], quantize(band));
    }

    SceneBundle scene;
    Band pan(spec.rows, spec.cols, spec.bit_depth);
    const Band& r = truth.bands[0].second;
    const Band& g = truth.bands[1].second;
    const Band& b = truth.bands[2].second;
    for (std::size_t k = 0; k < pan.values.size(); ++k) {
        pan.values[k] = 0.25 * r.values[k] + 0.5 * g.values[k] + 0.25 * b.values[k];
    }
    scene.pan = quantize(pan);

    for (const auto& [name, band] : truth.bands) {
        scene.ms_low.add(name, quantize(block_average(band, spec.scale)));
    }
    scene.ms_up = upsample_nearest(scene.ms_low, spec.rows, spec.cols);
    scene.truth = std::move(truth);
    return scene;
}

}  // namespace panqa
