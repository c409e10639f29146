#pragma once

// Image + heatmap -> caption: normalize, resample to the image, threshold,
// label components, drop speckle, extract attributes, render.

#include "heatcap/attributes.hpp"
#include "heatcap/captioner.hpp"
#include "heatcap/colornames.hpp"
#include "heatcap/error.hpp"
#include "heatcap/raster.hpp"
#include "heatcap/segmentation.hpp"

#include <string>
#include <vector>

namespace heatcap {

struct CaptionSettings {
    double threshold = 0.5;
    Connectivity connectivity = Connectivity::Eight;
    double min_area_fraction = 0.005;
    NormalizeMode normalize_mode = NormalizeMode::Clamp;
    ColorTable color_table = default_color_table();
    CaptionOptions caption;
};

struct HeatmapCaption {
    Caption caption;
    Heatmap heatmap; ///< normalized and resampled to the image
    std::vector<ObjectRegion> regions;
};

namespace detail {

template <typename F>
auto in_stage(Stage stage, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        throw e.with_stage(stage);
    }
}

} // namespace detail

inline HeatmapCaption caption_heatmap(const ImageRGB& image, const Heatmap& heatmap, const CaptionSettings& settings,
                                      const Classifier& classifier, const std::string& heatmap_label = {})
{
    auto prepared = detail::in_stage(Stage::Raster, [&] {
        return resample_to(normalize(heatmap, settings.normalize_mode), image.size());
    });

    auto regions = detail::in_stage(Stage::Segmentation, [&] {
        auto mask = threshold(prepared, settings.threshold);
        return filter_regions(connected_components(mask, settings.connectivity), settings.min_area_fraction,
                              image.size().area());
    });

    auto objects = detail::in_stage(Stage::Attributes, [&] {
        std::vector<ObjectAttributes> out;
        out.reserve(regions.size());
        for (const auto& region : regions)
            out.push_back(extract_attributes(image, prepared, region, classifier, settings.color_table, heatmap_label));
        return out;
    });

    auto caption = render_caption(objects, settings.caption);
    return {std::move(caption), std::move(prepared), std::move(regions)};
}

} // namespace heatcap
