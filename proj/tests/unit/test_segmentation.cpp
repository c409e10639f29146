#include "heatcap/segmentation.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace heatcap;

namespace {

BinaryMask mask_from(std::size_t w, std::size_t h, std::initializer_list<Pixel> on)
{
    BinaryMask m{w, h, std::vector<std::uint8_t>(w * h, 0)};
    for (auto p : on) m.bits[p.row * w + p.col] = 1;
    return m;
}

} // namespace

TEST(Threshold, SpecExamples)
{
    EXPECT_EQ(threshold(Heatmap(3, 1, {0, 0, 0}), 0.5).count(), 0u);
    EXPECT_EQ(threshold(Heatmap(3, 1, {0.4, 0.5, 0.6}), 0.5).bits, (std::vector<std::uint8_t>{0, 0, 1}));
    EXPECT_EQ(threshold(Heatmap(3, 1, {0.0, 0.01, 1.0}), 0.0).bits, (std::vector<std::uint8_t>{0, 1, 1}));
}

TEST(Threshold, RejectsOutOfRangeTau)
{
    EXPECT_THROW(threshold(Heatmap(1, 1, {0}), -0.1), Error);
    EXPECT_THROW(threshold(Heatmap(1, 1, {0}), 1.1), Error);
}

TEST(Threshold, MonotoneInTau)
{
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const auto h = oracle::random_heatmap(rng, 1 + rng() % 16, 1 + rng() % 16);
        double t1 = u(rng), t2 = u(rng);
        if (t1 > t2) std::swap(t1, t2);
        const auto lo = threshold(h, t1), hi = threshold(h, t2);
        for (std::size_t k = 0; k < lo.bits.size(); ++k) ASSERT_LE(hi.bits[k], lo.bits[k]);
    }
}

TEST(Components, EmptyMask)
{
    EXPECT_TRUE(connected_components(mask_from(4, 4, {})).empty());
}

TEST(Components, TwoBlocksTieBreak)
{
    const auto m = mask_from(5, 5, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {3, 3}, {3, 4}, {4, 3}, {4, 4}});
    const auto regions = connected_components(m);
    ASSERT_EQ(regions.size(), 2u);
    EXPECT_EQ(regions[0].id, 1u);
    EXPECT_EQ(regions[0].bbox, (BBox{0, 0, 2, 2}));
    EXPECT_EQ(regions[0].pixel_count, 4u);
    EXPECT_EQ(regions[1].bbox, (BBox{3, 3, 2, 2}));
    EXPECT_EQ(regions[1].pixel_count, 4u);
}

TEST(Components, DiagonalPair)
{
    const auto m = mask_from(2, 2, {{0, 0}, {1, 1}});
    EXPECT_EQ(connected_components(m, Connectivity::Eight).size(), 1u);
    EXPECT_EQ(connected_components(m, Connectivity::Four).size(), 2u);
}

TEST(Components, LargerFirst)
{
    const auto m = mask_from(6, 1, {{0, 0}, {0, 3}, {0, 4}, {0, 5}});
    const auto regions = connected_components(m);
    ASSERT_EQ(regions.size(), 2u);
    EXPECT_EQ(regions[0].pixel_count, 3u);
    EXPECT_EQ(regions[0].bbox, (BBox{3, 0, 3, 1}));
    EXPECT_EQ(regions[1].id, 2u);
}

TEST(Components, MatchesFloodFillOracle)
{
    std::mt19937 rng(1234);
    for (int i = 0; i < 300; ++i) {
        const auto m = oracle::random_mask(rng, 32);
        for (auto conn : {Connectivity::Four, Connectivity::Eight}) {
            const auto got = connected_components(m, conn);
            const auto want = oracle::flood_fill(m, static_cast<int>(conn));
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t k = 0; k < got.size(); ++k) {
                ASSERT_EQ(got[k].pixels, want[k].pixels);
                ASSERT_EQ(got[k].bbox, want[k].bbox);
                ASSERT_EQ(got[k].id, k + 1);
            }
        }
    }
}

TEST(Components, PartitionOfMask)
{
    std::mt19937 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const auto m = oracle::random_mask(rng, 24);
        const auto regions = connected_components(m, i % 2 ? Connectivity::Four : Connectivity::Eight);
        std::set<Pixel> seen;
        std::size_t total = 0;
        for (const auto& r : regions) {
            total += r.pixel_count;
            ASSERT_LE(r.pixel_count, r.bbox.w * r.bbox.h);
            bool top = false, bottom = false, left = false, right = false;
            for (const auto& p : r.pixels) {
                ASSERT_TRUE(seen.insert(p).second);
                ASSERT_TRUE(m.at(p.row, p.col));
                top |= p.row == r.bbox.y;
                bottom |= p.row == r.bbox.y + r.bbox.h - 1;
                left |= p.col == r.bbox.x;
                right |= p.col == r.bbox.x + r.bbox.w - 1;
            }
            ASSERT_TRUE(top && bottom && left && right);
        }
        ASSERT_EQ(total, m.count());
        ASSERT_EQ(seen.size(), m.count());
    }
}

TEST(Filter, Boundaries)
{
    const auto m = mask_from(10, 10, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {5, 5}, {5, 6}, {5, 7}, {5, 8}, {5, 9}});
    const auto regions = connected_components(m);
    ASSERT_EQ(regions.size(), 2u);

    const auto same = filter_regions(regions, 0.0, 100);
    ASSERT_EQ(same.size(), 2u);

    const auto dropped = filter_regions(regions, 0.05, 100);
    ASSERT_EQ(dropped.size(), 1u);
    EXPECT_EQ(dropped[0].pixel_count, 5u);

    // 5 / 100 == 0.05 exactly is kept, ids untouched.
    const auto kept = filter_regions({regions[1], regions[0]}, 0.04, 100);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].id, 2u);
    EXPECT_EQ(kept[1].id, 1u);
}
