#include "heatcap/raster.hpp"
#include "heatcap/raster_io.hpp"
#include "support/png_writer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

using namespace heatcap;

namespace {

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected heatcap::Error";
    return ErrorCode::InvalidArgument;
}

Bytes as_bytes(std::string_view s) { return {s.begin(), s.end()}; }

} // namespace

TEST(LoadImage, SolidRedPng)
{
    const auto png = encode_png(ImageRGB(2, 2, Rgb{255, 0, 0}));
    const auto img = decode_image(png);
    EXPECT_EQ(img, ImageRGB(2, 2, Rgb{255, 0, 0}));
}

TEST(LoadImage, RgbaDropsAlpha)
{
    const auto png = testpng::encode(2, 1, PNG_COLOR_TYPE_RGBA, 8, {10, 20, 30, 0, 40, 50, 60, 255});
    const auto img = decode_image(png);
    ASSERT_EQ(img.size(), (Size{2, 1}));
    EXPECT_EQ(img.at(0, 0), (Rgb{10, 20, 30}));
    EXPECT_EQ(img.at(0, 1), (Rgb{40, 50, 60}));
}

TEST(LoadImage, GrayExpandsToRgb)
{
    const auto img = decode_image(testpng::encode(1, 1, PNG_COLOR_TYPE_GRAY, 8, {77}));
    EXPECT_EQ(img.at(0, 0), (Rgb{77, 77, 77}));
}

TEST(LoadImage, TruncatedPngIsCorrupt)
{
    auto png = encode_png(ImageRGB(16, 16, Rgb{1, 2, 3}));
    png.resize(png.size() / 2);
    EXPECT_EQ(code_of([&] { decode_image(png); }), ErrorCode::CorruptData);
}

TEST(LoadImage, ErrorsAreDistinct)
{
    EXPECT_EQ(code_of([] { load_image("/nonexistent/file.png"); }), ErrorCode::FileNotFound);
    EXPECT_EQ(code_of([] { decode_image(as_bytes("GIF89a......")); }), ErrorCode::UnsupportedFormat);
}

TEST(LoadImage, PlainAndBinaryPpm)
{
    const auto p3 = decode_image(as_bytes("P3\n# c\n2 1\n255\n255 0 0  0 0 255\n"));
    EXPECT_EQ(p3.at(0, 0), (Rgb{255, 0, 0}));
    EXPECT_EQ(p3.at(0, 1), (Rgb{0, 0, 255}));
    std::string p6 = "P6 1 1 255\n";
    p6 += std::string{'\x01', '\x02', '\x03'};
    EXPECT_EQ(decode_image(as_bytes(p6)).at(0, 0), (Rgb{1, 2, 3}));
    EXPECT_EQ(code_of([] { decode_image(as_bytes("P6 2 2 255\n\x01")); }), ErrorCode::CorruptData);
}

TEST(LoadImage, PngRoundTrip)
{
    std::mt19937 rng(7);
    std::vector<Rgb> px(13 * 7);
    for (auto& p : px) p = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
    const ImageRGB img(13, 7, px);
    const auto path = std::filesystem::temp_directory_path() / "heatcap_roundtrip.png";
    save_png(img, path);
    EXPECT_EQ(load_image(path), img);
    std::filesystem::remove(path);
}

TEST(LoadHeatmap, EightBitScaling)
{
    const auto h = decode_heatmap(testpng::encode(2, 1, PNG_COLOR_TYPE_GRAY, 8, {128, 255}));
    EXPECT_DOUBLE_EQ(h.at(0, 0), 128.0 / 255.0);
    EXPECT_NEAR(h.at(0, 0), 0.50196, 1e-5);
    EXPECT_DOUBLE_EQ(h.at(0, 1), 1.0);
}

TEST(LoadHeatmap, SixteenBitScaling)
{
    const auto h = decode_heatmap(testpng::encode(3, 1, PNG_COLOR_TYPE_GRAY, 16, {65535, 0, 256}));
    EXPECT_DOUBLE_EQ(h.at(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(h.at(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(h.at(0, 2), 256.0 / 65535.0);
}

TEST(LoadHeatmap, ColorPngRejected)
{
    EXPECT_EQ(code_of([] { decode_heatmap(encode_png(ImageRGB(1, 1, Rgb{1, 2, 3}))); }), ErrorCode::UnsupportedFormat);
}

TEST(LoadHeatmap, CsvClampsValues)
{
    const auto h = decode_heatmap(as_bytes("-0.5, 0.5\n2.0,0.25\n"));
    ASSERT_EQ(h.size(), (Size{2, 2}));
    EXPECT_EQ(std::vector<double>(h.values().begin(), h.values().end()), (std::vector<double>{0, 0.5, 1, 0.25}));
}

TEST(LoadHeatmap, CsvErrors)
{
    EXPECT_EQ(code_of([] { decode_heatmap(as_bytes("1,2,3\n4,5,6,7\n")); }), ErrorCode::NonRectangular);
    EXPECT_EQ(code_of([] { decode_heatmap(as_bytes("1,abc\n")); }), ErrorCode::CorruptData);
    EXPECT_EQ(code_of([] { decode_heatmap(as_bytes("1,nan\n")); }), ErrorCode::InvalidData);
    EXPECT_EQ(code_of([] { load_heatmap("/nonexistent/h.csv"); }), ErrorCode::FileNotFound);
}

TEST(Normalize, SpecExamples)
{
    auto vals = [](const Heatmap& h) { return std::vector<double>(h.values().begin(), h.values().end()); };
    EXPECT_EQ(vals(normalize(RawRaster{2, 1, {1, 3}}, NormalizeMode::MinMax)), (std::vector<double>{0, 1}));
    EXPECT_EQ(vals(normalize(RawRaster{3, 1, {5, 5, 5}}, NormalizeMode::MinMax)), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(vals(normalize(RawRaster{3, 1, {-0.5, 0.5, 2.0}}, NormalizeMode::Clamp)), (std::vector<double>{0, 0.5, 1}));
}

TEST(Normalize, NonFiniteRejected)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(code_of([&] { normalize(RawRaster{1, 1, {nan}}, NormalizeMode::Clamp); }), ErrorCode::InvalidData);
    EXPECT_EQ(code_of([&] { normalize(RawRaster{1, 1, {inf}}, NormalizeMode::MinMax); }), ErrorCode::InvalidData);
}

TEST(Normalize, MinMaxAttainsBounds)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int i = 0; i < 1000; ++i) {
        RawRaster raw{1 + rng() % 9, 1 + rng() % 9, {}};
        raw.values.resize(raw.width * raw.height);
        for (auto& v : raw.values) v = u(rng);
        const auto h = normalize(raw, NormalizeMode::MinMax);
        const auto [lo, hi] = std::minmax_element(h.values().begin(), h.values().end());
        EXPECT_EQ(*lo, 0.0);
        if (raw.values.size() > 1) {
            EXPECT_EQ(*hi, 1.0);
        }
    }
}

TEST(Resample, IdentityAndConstant)
{
    const Heatmap h(3, 2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    EXPECT_EQ(resample_to(h, h.size()), h);
    const auto c = resample_to(Heatmap(1, 1, {0.7}), {3, 3});
    for (double v : c.values()) EXPECT_DOUBLE_EQ(v, 0.7);
}

TEST(Resample, BilinearMidpoint)
{
    const Heatmap h(2, 1, {0.0, 1.0});
    // Three columns: the middle pixel center maps exactly onto the source midpoint.
    const auto three = resample_to(h, {3, 1});
    EXPECT_DOUBLE_EQ(three.at(0, 1), 0.5);
    // Four columns: centers map to -0.25, 0.25, 0.75, 1.25 in source space.
    const auto four = resample_to(h, {4, 1});
    EXPECT_DOUBLE_EQ(four.at(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(four.at(0, 1), 0.25);
    EXPECT_DOUBLE_EQ(four.at(0, 2), 0.75);
    EXPECT_DOUBLE_EQ(four.at(0, 3), 1.0);
}

TEST(Resample, StaysInUnitInterval)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 200; ++i) {
        const std::size_t w = 1 + rng() % 8, h = 1 + rng() % 8;
        std::vector<double> v(w * h);
        for (auto& x : v) x = u(rng);
        const auto out = resample_to(Heatmap(w, h, v), {1 + rng() % 20, 1 + rng() % 20});
        for (double x : out.values()) ASSERT_TRUE(x >= 0 && x <= 1);
    }
}

TEST(Hsv, SpecExamples)
{
    auto red = rgb_to_hsv({255, 0, 0});
    EXPECT_DOUBLE_EQ(red.hue, 0);
    EXPECT_DOUBLE_EQ(red.saturation, 1);
    EXPECT_DOUBLE_EQ(red.value, 1);
    auto grey = rgb_to_hsv({128, 128, 128});
    EXPECT_DOUBLE_EQ(grey.hue, 0);
    EXPECT_DOUBLE_EQ(grey.saturation, 0);
    EXPECT_DOUBLE_EQ(grey.value, 128.0 / 255.0);
    auto orange = rgb_to_hsv({255, 128, 0});
    EXPECT_NEAR(orange.hue, 60.0 * 128.0 / 255.0, 1e-12);
    EXPECT_NEAR(orange.hue, 30.12, 0.005);
    EXPECT_DOUBLE_EQ(orange.saturation, 1);
}

TEST(Hsv, InverseWithinOneExhaustive)
{
    for (int r = 0; r < 256; ++r)
        for (int g = 0; g < 256; ++g)
            for (int b = 0; b < 256; ++b) {
                const Rgb in{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
                const auto hsv = rgb_to_hsv(in);
                ASSERT_TRUE(hsv.hue >= 0 && hsv.hue < 360);
                const auto out = hsv_to_rgb(hsv);
                ASSERT_LE(std::abs(out.r - r), 1);
                ASSERT_LE(std::abs(out.g - g), 1);
                ASSERT_LE(std::abs(out.b - b), 1);
            }
}

TEST(Crop, RowsAndColumns)
{
    std::vector<Rgb> px;
    for (std::uint8_t i = 0; i < 12; ++i) px.push_back({i, 0, 0});
    const ImageRGB img(4, 3, px);
    const auto c = crop(img, {1, 1, 2, 2});
    EXPECT_EQ(c.size(), (Size{2, 2}));
    EXPECT_EQ(c.at(0, 0).r, 5);
    EXPECT_EQ(c.at(1, 1).r, 10);
    EXPECT_EQ(code_of([&] { crop(img, {3, 0, 2, 1}); }), ErrorCode::InvalidArgument);
}

TEST(Rasters, InvariantsEnforced)
{
    EXPECT_EQ(code_of([] { Heatmap(2, 1, {0.5}); }), ErrorCode::InvalidData);
    EXPECT_EQ(code_of([] { Heatmap(1, 1, {1.5}); }), ErrorCode::InvalidData);
    EXPECT_EQ(code_of([] { ImageRGB(0, 1, std::vector<Rgb>{}); }), ErrorCode::InvalidData);
}
