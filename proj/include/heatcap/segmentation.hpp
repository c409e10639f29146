#pragma once

#include "heatcap/error.hpp"
#include "heatcap/raster.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace heatcap {

struct BinaryMask {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits; ///< row-major, 0 or 1

    bool at(std::size_t row, std::size_t col) const { return bits[row * width + col] != 0; }
    std::size_t count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }
};

struct Pixel {
    std::size_t row = 0;
    std::size_t col = 0;

    friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

struct ObjectRegion {
    std::size_t id = 0; ///< 1-based, in output order
    BBox bbox;
    std::size_t pixel_count = 0;
    std::vector<Pixel> pixels; ///< row-major order
};

enum class Connectivity { Four = 4, Eight = 8 };

/// Bit set iff value > tau.
inline BinaryMask threshold(const Heatmap& h, double tau)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be in [0, 1]");
    BinaryMask mask{h.width(), h.height(), std::vector<std::uint8_t>(h.size().area())};
    const auto values = h.values();
    for (std::size_t i = 0; i < values.size(); ++i) mask.bits[i] = values[i] > tau ? 1 : 0;
    return mask;
}

namespace detail {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent_[a] = b; // smaller index becomes root
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

/// Two-pass union-find labeling. Regions are ordered by descending
/// pixel_count, ties by the raster position of their first pixel.
inline std::vector<ObjectRegion> connected_components(const BinaryMask& mask, Connectivity connectivity = Connectivity::Eight)
{
    const auto w = mask.width;
    const auto h = mask.height;
    detail::DisjointSet sets(w * h);

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            const auto i = r * w + c;
            if (c > 0 && mask.at(r, c - 1)) sets.unite(i, i - 1);
            if (r > 0) {
                if (mask.at(r - 1, c)) sets.unite(i, i - w);
                if (connectivity == Connectivity::Eight) {
                    if (c > 0 && mask.at(r - 1, c - 1)) sets.unite(i, i - w - 1);
                    if (c + 1 < w && mask.at(r - 1, c + 1)) sets.unite(i, i - w + 1);
                }
            }
        }
    }

    // Roots are the smallest raster index of each set, so scanning in raster
    // order meets every root before its other members.
    std::vector<std::size_t> slot(w * h, SIZE_MAX);
    std::vector<ObjectRegion> regions;
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            const auto root = sets.find(r * w + c);
            if (slot[root] == SIZE_MAX) {
                slot[root] = regions.size();
                regions.push_back(ObjectRegion{0, BBox{c, r, 1, 1}, 0, {}});
            }
            auto& region = regions[slot[root]];
            region.pixels.push_back({r, c});
        }
    }

    for (auto& region : regions) {
        std::size_t min_c = SIZE_MAX, max_c = 0, min_r = SIZE_MAX, max_r = 0;
        for (const auto& p : region.pixels) {
            min_c = std::min(min_c, p.col);
            max_c = std::max(max_c, p.col);
            min_r = std::min(min_r, p.row);
            max_r = std::max(max_r, p.row);
        }
        region.bbox = BBox{min_c, min_r, max_c - min_c + 1, max_r - min_r + 1};
        region.pixel_count = region.pixels.size();
    }

    // Regions were created in first-pixel raster order; stable sort keeps it
    // as the tie-break.
    std::stable_sort(regions.begin(), regions.end(),
                     [](const ObjectRegion& a, const ObjectRegion& b) { return a.pixel_count > b.pixel_count; });
    for (std::size_t i = 0; i < regions.size(); ++i) regions[i].id = i + 1;
    return regions;
}

/// Keeps regions covering at least min_area_fraction of the image.
inline std::vector<ObjectRegion> filter_regions(std::vector<ObjectRegion> regions, double min_area_fraction, std::size_t image_area)
{
    if (image_area == 0) throw Error(ErrorCode::InvalidArgument, "image area must be positive");
    std::erase_if(regions, [&](const ObjectRegion& r) {
        return static_cast<double>(r.pixel_count) / static_cast<double>(image_area) < min_area_fraction;
    });
    return regions;
}

} // namespace heatcap
