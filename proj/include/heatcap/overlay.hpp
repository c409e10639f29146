#pragma once

#include "heatcap/raster.hpp"
#include "heatcap/segmentation.hpp"

#include <array>
#include <cmath>
#include <span>

namespace heatcap {

/// 256-entry blue -> cyan -> green -> yellow -> red lookup table, linear
/// between the five stops at indices 0, 64, 128, 192, 255 (rounded to the
/// nearest integer).
inline const std::array<Rgb, 256>& overlay_colormap()
{
    static const std::array<Rgb, 256> lut = [] {
        constexpr std::array<std::array<double, 3>, 5> stops{{
            {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0},
        }};
        constexpr std::array<double, 5> at{0, 64, 128, 192, 255};
        std::array<Rgb, 256> out{};
        for (int i = 0; i < 256; ++i) {
            std::size_t s = 0;
            while (s + 2 < at.size() && i > at[s + 1]) ++s;
            const double t = (i - at[s]) / (at[s + 1] - at[s]);
            auto mix = [&](int ch) {
                return static_cast<std::uint8_t>(std::lround(stops[s][ch] + (stops[s + 1][ch] - stops[s][ch]) * t));
            };
            out[i] = {mix(0), mix(1), mix(2)};
        }
        return out;
    }();
    return lut;
}

inline constexpr Rgb kOutlineColor{255, 255, 255};
inline constexpr std::size_t kOutlineWidth = 2;

/// Image blended 50/50 with the colormapped heatmap, then 2-px outlines
/// drawn just inside each region's bbox.
inline ImageRGB render_overlay(const ImageRGB& image, const Heatmap& heatmap, std::span<const ObjectRegion> regions)
{
    if (image.size() != heatmap.size()) throw Error(ErrorCode::InvalidArgument, "overlay needs matching dimensions");
    const auto& lut = overlay_colormap();

    ImageRGB out = image;
    for (std::size_t r = 0; r < image.height(); ++r) {
        for (std::size_t c = 0; c < image.width(); ++c) {
            const auto idx = static_cast<std::size_t>(std::lround(heatmap.at(r, c) * 255.0));
            const Rgb& m = lut[idx];
            const Rgb& p = image.at(r, c);
            out.at(r, c) = {static_cast<std::uint8_t>((p.r + m.r + 1) / 2), static_cast<std::uint8_t>((p.g + m.g + 1) / 2),
                            static_cast<std::uint8_t>((p.b + m.b + 1) / 2)};
        }
    }

    for (const auto& region : regions) {
        const auto& b = region.bbox;
        for (std::size_t r = b.y; r < b.y + b.h; ++r) {
            for (std::size_t c = b.x; c < b.x + b.w; ++c) {
                const bool edge = r < b.y + kOutlineWidth || r + kOutlineWidth >= b.y + b.h || c < b.x + kOutlineWidth ||
                                  c + kOutlineWidth >= b.x + b.w;
                if (edge) out.at(r, c) = kOutlineColor;
            }
        }
    }
    return out;
}

} // namespace heatcap
