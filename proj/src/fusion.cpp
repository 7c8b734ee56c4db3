#include "panqa/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "panqa/spectral.hpp"

namespace panqa {

namespace {

double mean_of(const Band& band) {
    double sum = 0.0;
    for (double v : band.values) sum += v;
    return sum / static_cast<double>(band.pixel_count());
}

Band clamp_to_range(Band band) {
    const double max_dn = band.max_dn();
    for (double& v : band.values) v = std::clamp(v, 0.0, max_dn);
    return band;
}

void check_scene(const SceneBundle& scene) {
    if (scene.ms_up.count() == 0) throw Error("fuse: scene has no upsampled MS bands");
    if (scene.ms_up.rows() != scene.pan.rows || scene.ms_up.cols() != scene.pan.cols) {
        throw Error("fuse: upsampled MS is " + std::to_string(scene.ms_up.rows()) + "x" +
                    std::to_string(scene.ms_up.cols()) + " but PAN is " +
                    std::to_string(scene.pan.rows) + "x" + std::to_string(scene.pan.cols));
    }
}

FusionResult fuse_hfa(const SceneBundle& scene, int lowpass_size) {
    const Band low = box_lowpass(scene.pan, lowpass_size);
    FusionResult result;
    for (const auto& [name, band] : scene.ms_up.bands) {
        Band fused = band;
        for (std::size_t k = 0; k < fused.values.size(); ++k) {
            fused.values[k] += scene.pan.values[k] - low.values[k];
        }
        result.image.add(name, clamp_to_range(std::move(fused)));
    }
    return result;
}

FusionResult fuse_hfm(const SceneBundle& scene, int lowpass_size) {
    const Band low = box_lowpass(scene.pan, lowpass_size);
    FusionResult result;
    for (double v : low.values) {
        if (v == 0.0) ++result.excluded_pixels;  // per pixel, not per band
    }
    for (const auto& [name, band] : scene.ms_up.bands) {
        Band fused = band;
        for (std::size_t k = 0; k < fused.values.size(); ++k) {
            if (low.values[k] == 0.0) continue;  // keep the MS value
            fused.values[k] *= scene.pan.values[k] / low.values[k];
        }
        result.image.add(name, clamp_to_range(std::move(fused)));
    }
    return result;
}

// Intensity substitution with I = (R+G+B)/3. The chroma is carried as the
// per-band offsets from I, so replacing I shifts all three bands by the same
// delta and the transform inverts exactly.
FusionResult fuse_ihs(const SceneBundle& scene) {
    if (scene.ms_up.count() != 3) {
        throw Error("IHS requires 3 bands, got " + std::to_string(scene.ms_up.count()));
    }
    const Band& r = scene.ms_up.bands[0].second;
    const Band& g = scene.ms_up.bands[1].second;
    const Band& b = scene.ms_up.bands[2].second;

    Band intensity(r.rows, r.cols, r.bit_depth);
    for (std::size_t k = 0; k < intensity.values.size(); ++k) {
        intensity.values[k] = (r.values[k] + g.values[k] + b.values[k]) / 3.0;
    }

    const Band matched =
        histogram_match_linear(scene.pan, mean_of(intensity), std_dev(intensity));

    FusionResult result;
    for (const auto& [name, band] : scene.ms_up.bands) {
        Band fused = band;
        for (std::size_t k = 0; k < fused.values.size(); ++k) {
            fused.values[k] += matched.values[k] - intensity.values[k];
        }
        result.image.add(name, clamp_to_range(std::move(fused)));
    }
    return result;
}

}  // namespace

FusionKind parse_fusion_kind(const std::string& name) {
    if (name == "upsample") return FusionKind::UpsampleOnly;
    if (name == "ihs") return FusionKind::Ihs;
    if (name == "hfa") return FusionKind::Hfa;
    if (name == "hfm") return FusionKind::Hfm;
    throw Error("unknown fusion method '" + name + "' (expected upsample|ihs|hfa|hfm)");
}

std::string fusion_kind_name(FusionKind kind) {
    switch (kind) {
        case FusionKind::UpsampleOnly: return "upsample";
        case FusionKind::Ihs: return "ihs";
        case FusionKind::Hfa: return "hfa";
        case FusionKind::Hfm: return "hfm";
    }
    return "?";
}

Band box_lowpass(const Band& src, int size) {
    if (size < 3 || size % 2 == 0) {
        throw Error("lowpass size must be odd and >= 3, got " + std::to_string(size));
    }
    const int half = size / 2;
    Band out(src.rows, src.cols, src.bit_depth);
    for (int i = 0; i < src.rows; ++i) {
        for (int j = 0; j < src.cols; ++j) {
            double acc = 0.0;
            for (int r = -half; r <= half; ++r) {
                for (int c = -half; c <= half; ++c) {
                    const int ii = std::clamp(i + r, 0, src.rows - 1);
                    const int jj = std::clamp(j + c, 0, src.cols - 1);
                    acc += src.at(ii, jj);
                }
            }
            out.at(i, j) = acc / (static_cast<double>(size) * size);
        }
    }
    return out;
}

Band histogram_match_linear(const Band& source, double target_mean, double target_sd) {
    const double sd = std_dev(source);
    if (sd == 0.0) throw Error("histogram match: source band is constant");
    if (target_sd < 0.0) throw Error("histogram match: target SD must be >= 0");
    const double mean = mean_of(source);
    const double gain = target_sd / sd;
    Band out = source;
    for (double& v : out.values) v = (v - mean) * gain + target_mean;
    return out;
}

FusionResult fuse(const SceneBundle& scene, const FusionMethod& method) {
    check_scene(scene);
    switch (method.kind) {
        case FusionKind::UpsampleOnly: {
            FusionResult result;
            result.image = scene.ms_up;
            return result;
        }
        case FusionKind::Hfa: return fuse_hfa(scene, method.lowpass_size);
        case FusionKind::Hfm: return fuse_hfm(scene, method.lowpass_size);
        case FusionKind::Ihs: return fuse_ihs(scene);
    }
    throw Error("fuse: unhandled method");
}

}  // namespace panqa
