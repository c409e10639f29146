#pragma once

// Per-object attributes: identity, position and relative size, salient
// sub-regions, dominant colors.

#include "heatcap/colornames.hpp"
#include "heatcap/error.hpp"
#include "heatcap/raster.hpp"
#include "heatcap/segmentation.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heatcap {

/// Nine-cell grid position, numbered row-major from the top-left.
enum class PositionName {
    TopLeft,
    TopCenter,
    TopRight,
    CenterLeft,
    Center,
    CenterRight,
    BottomLeft,
    BottomCenter,
    BottomRight,
};

inline constexpr std::array<std::string_view, 9> kPositionNames{
    "top-left",    "top-center", "top-right",     "center-left",  "center",
    "center-right", "bottom-left", "bottom-center", "bottom-right",
};

inline std::string_view to_string(PositionName p) noexcept { return kPositionNames[static_cast<std::size_t>(p)]; }

inline PositionName cell_position(std::size_t row_cell, std::size_t col_cell) noexcept
{
    return static_cast<PositionName>(row_cell * 3 + col_cell);
}

/// Accepts the canonical names plus "middle"/"centre" spellings.
inline std::optional<PositionName> parse_position(std::string_view name)
{
    std::string s(name);
    for (std::string_view alias : {"middle", "centre"}) {
        for (auto pos = s.find(alias); pos != std::string::npos; pos = s.find(alias, pos))
            s.replace(pos, alias.size(), "center");
    }
    for (std::size_t i = 0; i < kPositionNames.size(); ++i)
        if (s == kPositionNames[i]) return static_cast<PositionName>(i);
    return std::nullopt;
}

namespace detail {

// Cell index of a coordinate along one axis: floor(3 * numer / (2 * len))
// clamped to 2, where numer / 2 is the coordinate. Integer arithmetic keeps
// boundary cases exact.
inline std::size_t third_index(std::size_t twice_coord, std::size_t len) noexcept
{
    return std::min<std::size_t>(2, (3 * twice_coord) / (2 * len));
}

} // namespace detail

/// Grid cell of the bbox center within the image.
inline PositionName locate(const BBox& box, Size image)
{
    if (!box.inside(image)) throw Error(ErrorCode::InvalidArgument, "bbox outside image");
    const auto col = detail::third_index(2 * box.x + box.w, image.width);
    const auto row = detail::third_index(2 * box.y + box.h, image.height);
    return cell_position(row, col);
}

/// Bounding-box area over image area.
inline double relative_size(const BBox& box, Size image)
{
    if (!box.inside(image)) throw Error(ErrorCode::InvalidArgument, "bbox outside image");
    return static_cast<double>(box.w * box.h) / static_cast<double>(image.area());
}

/// Splits the bbox into a 3x3 grid (each pixel goes to the cell holding its
/// center) and returns up to three non-empty cells by descending mean
/// intensity, ties in row-major order.
inline std::vector<PositionName> salient_subregions(const Heatmap& h, const BBox& box, std::size_t k = 3)
{
    if (!box.inside(h.size())) throw Error(ErrorCode::InvalidArgument, "bbox outside heatmap");

    std::array<double, 9> sum{};
    std::array<std::size_t, 9> count{};
    for (std::size_t r = 0; r < box.h; ++r) {
        const auto row_cell = detail::third_index(2 * r + 1, box.h);
        for (std::size_t c = 0; c < box.w; ++c) {
            const auto cell = row_cell * 3 + detail::third_index(2 * c + 1, box.w);
            sum[cell] += h.at(box.y + r, box.x + c);
            ++count[cell];
        }
    }

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t cell = 0; cell < 9; ++cell)
        if (count[cell] > 0) ranked.emplace_back(sum[cell] / static_cast<double>(count[cell]), cell);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<PositionName> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(static_cast<PositionName>(ranked[i].second));
    return out;
}

struct ColorShare {
    ColorName name;
    double pct = 0.0; ///< fraction of foreground pixels, (0, 1]

    friend bool operator==(const ColorShare&, const ColorShare&) = default;
};

/// Foreground heatmap cut-off for color statistics.
inline constexpr double kForegroundThreshold = 0.5;

/// Top-k color names among bbox pixels whose heatmap value exceeds 0.5,
/// ties in color-table order. Empty when there is no foreground.
inline std::vector<ColorShare> dominant_colors(const ImageRGB& image, const Heatmap& h, const BBox& box,
                                               const ColorTable& table = default_color_table(), std::size_t k = 3)
{
    if (!box.inside(image.size()) || !box.inside(h.size()))
        throw Error(ErrorCode::InvalidArgument, "bbox outside image or heatmap");

    const auto names = list_names(table);
    std::map<ColorName, std::size_t> order;
    for (std::size_t i = 0; i < names.size(); ++i) order.emplace(names[i], i);

    std::vector<std::size_t> hist(names.size(), 0);
    std::size_t foreground = 0;
    for (std::size_t r = box.y; r < box.y + box.h; ++r) {
        for (std::size_t c = box.x; c < box.x + box.w; ++c) {
            if (!(h.at(r, c) > kForegroundThreshold)) continue;
            ++foreground;
            ++hist[order.at(name_color(rgb_to_hsv(image.at(r, c)), table))];
        }
    }
    if (foreground == 0) return {};

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < hist.size(); ++i)
        if (hist[i] > 0) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return hist[a] > hist[b]; });

    std::vector<ColorShare> out;
    for (std::size_t i = 0; i < std::min(k, idx.size()); ++i)
        out.push_back({names[idx[i]], static_cast<double>(hist[idx[i]]) / static_cast<double>(foreground)});
    return out;
}

struct Identity {
    std::string label;
    double score = 1.0;

    friend bool operator==(const Identity&, const Identity&) = default;
};

/// Which object a classification request is for. heatmap_label is empty
/// when captioning a single heatmap.
struct ObjectKey {
    std::string heatmap_label;
    std::size_t object_id = 0;
};

class Classifier {
public:
    virtual ~Classifier() = default;
    /// Classifies the crop rows [y, y+h) x cols [x, x+w) of image.
    virtual Identity classify(const ImageRGB& image, const BBox& box, const ObjectKey& key) const = 0;
};

struct ObjectAttributes {
    std::size_t object_id = 0;
    BBox bbox;
    Identity identity;
    PositionName position = PositionName::Center;
    double area_fraction = 0.0;
    std::vector<PositionName> salient_regions;
    std::vector<ColorShare> dominant_colors;

    friend bool operator==(const ObjectAttributes&, const ObjectAttributes&) = default;
};

/// image and heatmap must have the same dimensions.
inline ObjectAttributes extract_attributes(const ImageRGB& image, const Heatmap& h, const ObjectRegion& region,
                                           const Classifier& classifier, const ColorTable& table,
                                           const std::string& heatmap_label = {})
{
    if (image.size() != h.size()) throw Error(ErrorCode::InvalidArgument, "image and heatmap sizes differ");
    ObjectAttributes attrs;
    attrs.object_id = region.id;
    attrs.bbox = region.bbox;
    attrs.identity = classifier.classify(image, region.bbox, ObjectKey{heatmap_label, region.id});
    attrs.position = locate(region.bbox, image.size());
    attrs.area_fraction = relative_size(region.bbox, image.size());
    attrs.salient_regions = salient_subregions(h, region.bbox);
    attrs.dominant_colors = dominant_colors(image, h, region.bbox, table);
    return attrs;
}

} // namespace heatcap
