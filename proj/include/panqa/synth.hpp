#pragma once

#include <cstdint>

#include "panqa/band.hpp"

namespace panqa {

// Parameters for a deterministic synthetic scene. The truth image is a
// multi-octave value-noise texture; the PAN and low-res MS are derived from
// it, so fusion quality can be judged against a known high-res reference.
struct SynthSpec {
    int rows = 64;
    int cols = 64;
    int scale = 4;  // >= 2; rows and cols must be divisible by it
    std::uint64_t seed = 1;
    int texture_octaves = 4;  // >= 1
    int bit_depth = 8;
};

// Builds (truth MS, PAN, low-res MS, upsampled MS), bit-identical for equal
// specs. truth: three value-noise bands sharing structure with per-band
// coloring. PAN: 0.25 R + 0.5 G + 0.25 B, quantized. ms_low: truth block-
// averaged by `scale`, quantized. ms_up: ms_low replicated back to PAN size.
SceneBundle synth_scene(const SynthSpec& spec);

}  // namespace panqa
