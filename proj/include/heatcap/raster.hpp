#pragma once

#include "heatcap/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace heatcap {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Size {
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t area() const noexcept { return width * height; }
    friend bool operator==(const Size&, const Size&) = default;
};

/// Axis-aligned box: x = column, y = row, w = columns, h = rows.
/// Covers rows [y, y+h) and columns [x, x+w).
struct BBox {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;

    bool inside(Size s) const noexcept
    {
        return w >= 1 && h >= 1 && x + w <= s.width && y + h <= s.height;
    }
    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Row-major 8-bit RGB raster.
class ImageRGB {
public:
    ImageRGB(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
        : size_{width, height}, pixels_(std::move(pixels))
    {
        if (width == 0 || height == 0)
            throw Error(ErrorCode::InvalidData, "image dimensions must be at least 1x1");
        if (pixels_.size() != width * height)
            throw Error(ErrorCode::InvalidData, "image pixel count does not match dimensions");
    }

    ImageRGB(std::size_t width, std::size_t height, Rgb fill)
        : ImageRGB(width, height, std::vector<Rgb>(width * height, fill))
    {
    }

    std::size_t width() const noexcept { return size_.width; }
    std::size_t height() const noexcept { return size_.height; }
    Size size() const noexcept { return size_; }
    std::span<const Rgb> pixels() const noexcept { return pixels_; }

    const Rgb& at(std::size_t row, std::size_t col) const { return pixels_[row * size_.width + col]; }
    Rgb& at(std::size_t row, std::size_t col) { return pixels_[row * size_.width + col]; }

    friend bool operator==(const ImageRGB&, const ImageRGB&) = default;

private:
    Size size_;
    std::vector<Rgb> pixels_;
};

/// Row-major intensity raster with every value in [0, 1].
class Heatmap {
public:
    Heatmap(std::size_t width, std::size_t height, std::vector<double> values)
        : size_{width, height}, values_(std::move(values))
    {
        if (width == 0 || height == 0)
            throw Error(ErrorCode::InvalidData, "heatmap dimensions must be at least 1x1");
        if (values_.size() != width * height)
            throw Error(ErrorCode::InvalidData, "heatmap value count does not match dimensions");
        for (double v : values_) {
            if (!(v >= 0.0 && v <= 1.0))
                throw Error(ErrorCode::InvalidData, "heatmap value outside [0, 1]");
        }
    }

    std::size_t width() const noexcept { return size_.width; }
    std::size_t height() const noexcept { return size_.height; }
    Size size() const noexcept { return size_; }
    std::span<const double> values() const noexcept { return values_; }

    double at(std::size_t row, std::size_t col) const { return values_[row * size_.width + col]; }

    friend bool operator==(const Heatmap&, const Heatmap&) = default;

private:
    Size size_;
    std::vector<double> values_;
};

/// Unvalidated float raster, the input to normalize().
struct RawRaster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;
};

enum class NormalizeMode { MinMax, Clamp };

inline Heatmap normalize(const RawRaster& raw, NormalizeMode mode)
{
    if (raw.values.size() != raw.width * raw.height)
        throw Error(ErrorCode::InvalidData, "raster value count does not match dimensions");
    for (double v : raw.values) {
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidData, "raster contains NaN or Inf");
    }

    std::vector<double> out(raw.values.size());
    if (mode == NormalizeMode::Clamp) {
        std::transform(raw.values.begin(), raw.values.end(), out.begin(),
                       [](double v) { return std::clamp(v, 0.0, 1.0); });
    } else if (!raw.values.empty()) {
        const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
        const double min = *lo;
        const double range = *hi - *lo;
        // A flat raster carries no attention signal: map it to zero.
        if (range > 0.0) {
            std::transform(raw.values.begin(), raw.values.end(), out.begin(), [&](double v) {
                return std::clamp((v - min) / range, 0.0, 1.0);
            });
        }
    }
    return Heatmap(raw.width, raw.height, std::move(out));
}

inline Heatmap normalize(const Heatmap& h, NormalizeMode mode)
{
    return normalize(RawRaster{h.width(), h.height(), {h.values().begin(), h.values().end()}}, mode);
}

/// Bilinear resampling with pixel-center alignment; source coordinates are
/// clamped to the edge pixels.
inline Heatmap resample_to(const Heatmap& heatmap, Size target)
{
    if (target.width == 0 || target.height == 0)
        throw Error(ErrorCode::InvalidArgument, "resample target must be at least 1x1");
    if (target == heatmap.size()) return heatmap;

    const auto src_w = heatmap.width();
    const auto src_h = heatmap.height();
    const double sx = static_cast<double>(src_w) / static_cast<double>(target.width);
    const double sy = static_cast<double>(src_h) / static_cast<double>(target.height);

    auto source_coord = [](std::size_t dst, double scale, std::size_t src_len) {
        double c = (static_cast<double>(dst) + 0.5) * scale - 0.5;
        c = std::clamp(c, 0.0, static_cast<double>(src_len - 1));
        auto i0 = static_cast<std::size_t>(std::floor(c));
        auto i1 = std::min(i0 + 1, src_len - 1);
        return std::tuple{i0, i1, c - static_cast<double>(i0)};
    };

    std::vector<double> out(target.area());
    for (std::size_t row = 0; row < target.height; ++row) {
        const auto [r0, r1, fy] = source_coord(row, sy, src_h);
        for (std::size_t col = 0; col < target.width; ++col) {
            const auto [c0, c1, fx] = source_coord(col, sx, src_w);
            const double top = heatmap.at(r0, c0) * (1.0 - fx) + heatmap.at(r0, c1) * fx;
            const double bottom = heatmap.at(r1, c0) * (1.0 - fx) + heatmap.at(r1, c1) * fx;
            out[row * target.width + col] = std::clamp(top * (1.0 - fy) + bottom * fy, 0.0, 1.0);
        }
    }
    return Heatmap(target.width, target.height, std::move(out));
}

struct HsvColor {
    double hue = 0.0;        ///< degrees in [0, 360)
    double saturation = 0.0; ///< [0, 1]
    double value = 0.0;      ///< [0, 1]
};

/// Hexcone conversion. Achromatic pixels get hue 0.
inline HsvColor rgb_to_hsv(Rgb px) noexcept
{
    const double r = px.r / 255.0;
    const double g = px.g / 255.0;
    const double b = px.b / 255.0;
    const double max = std::max({r, g, b});
    const double min = std::min({r, g, b});
    const double delta = max - min;

    HsvColor out;
    out.value = max;
    out.saturation = max > 0.0 ? delta / max : 0.0;
    if (delta <= 0.0) return out;

    double h;
    if (max == r)
        h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (max == g)
        h = 60.0 * ((b - r) / delta + 2.0);
    else
        h = 60.0 * ((r - g) / delta + 4.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.hue = h;
    return out;
}

inline Rgb hsv_to_rgb(const HsvColor& c) noexcept
{
    const double chroma = c.value * c.saturation;
    const double hp = std::fmod(c.hue, 360.0) / 60.0;
    const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
    }
    const double m = c.value - chroma;
    auto to8 = [m](double ch) {
        return static_cast<std::uint8_t>(std::clamp(std::lround((ch + m) * 255.0), 0L, 255L));
    };
    return {to8(r), to8(g), to8(b)};
}

/// Copy of rows [y, y+h) x cols [x, x+w).
inline ImageRGB crop(const ImageRGB& image, const BBox& box)
{
    if (!box.inside(image.size()))
        throw Error(ErrorCode::InvalidArgument, "crop box outside image");
    std::vector<Rgb> px;
    px.reserve(box.w * box.h);
    for (std::size_t row = box.y; row < box.y + box.h; ++row)
        for (std::size_t col = box.x; col < box.x + box.w; ++col)
            px.push_back(image.at(row, col));
    return ImageRGB(box.w, box.h, std::move(px));
}

} // namespace heatcap
