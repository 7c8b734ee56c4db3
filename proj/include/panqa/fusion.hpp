#pragma once

#include <string>

#include "panqa/band.hpp"

namespace panqa {

enum class FusionKind { UpsampleOnly, Ihs, Hfa, Hfm };

// Accepts "upsample", "ihs", "hfa", "hfm".
FusionKind parse_fusion_kind(const std::string& name);
std::string fusion_kind_name(FusionKind kind);

struct FusionMethod {
    FusionKind kind = FusionKind::UpsampleOnly;
    int lowpass_size = 5;  // box side for HFA/HFM, odd, >= 3
};

struct FusionResult {
    MultibandImage image;
    // HFM pixels where the low-passed PAN is zero; the band value is copied
    // from the upsampled MS there instead of modulated.
    long excluded_pixels = 0;
};

// Reference generators producing metric inputs:
//   UpsampleOnly  F_k = M_k (the degenerate baseline)
//   HFA           F_k = M_k + (P - lowpass(P)), clamped to DN range
//   HFM           F_k = M_k * P / lowpass(P), zero-lowpass pixels copied
//   IHS           intensity substitution on 3 bands: I = (R+G+B)/3 replaced
//                 by the PAN matched to I's mean/SD, chroma preserved, clamp
// M_k is scene.ms_up, which must already match the PAN dimensions.
FusionResult fuse(const SceneBundle& scene, const FusionMethod& method);

// Box mean with edge-replicate padding. size must be odd and >= 3.
Band box_lowpass(const Band& src, int size);

// Affine remap of a non-constant band to the requested mean/SD.
Band histogram_match_linear(const Band& source, double target_mean, double target_sd);

}  // namespace panqa
