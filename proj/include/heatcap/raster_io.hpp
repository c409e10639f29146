#pragma once

// PNG / PPM / CSV decoding and PNG encoding.

#include "heatcap/error.hpp"
#include "heatcap/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <csetjmp>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace heatcap {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

inline bool has_png_signature(std::span<const std::uint8_t> data)
{
    return data.size() >= 8 && png_sig_cmp(data.data(), 0, 8) == 0;
}

struct PngReadCursor {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

inline void png_read_from_memory(png_structp png, png_bytep out, png_size_t len)
{
    auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
    if (cur->offset + len > cur->size) png_error(png, "unexpected end of data");
    std::memcpy(out, cur->data + cur->offset, len);
    cur->offset += len;
}

inline void png_silent_warning(png_structp, png_const_charp) {}

struct DecodedPng {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 0;  // 1 (gray) or 3 (rgb)
    int bit_depth = 8; // 8 or 16
    Bytes samples;     // row-major; 16-bit samples big-endian
};

enum class PngTarget { Rgb8, Gray };

// All libpng calls happen in this frame. Objects with destructors are
// declared before setjmp so a longjmp never skips them.
inline DecodedPng decode_png(std::span<const std::uint8_t> data, PngTarget target)
{
    DecodedPng out;
    std::vector<png_bytep> rows;
    std::string failure;
    PngReadCursor cursor{data.data(), data.size(), 0};

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_silent_warning);
    if (!png) throw Error(ErrorCode::CorruptData, "libpng: cannot allocate read struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(ErrorCode::CorruptData, "libpng: cannot allocate info struct");
    }

    volatile bool unsupported = false;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        if (unsupported) throw Error(ErrorCode::UnsupportedFormat, failure);
        throw Error(ErrorCode::CorruptData, "corrupt PNG data");
    }

    png_set_read_fn(png, &cursor, png_read_from_memory);
    png_read_info(png, info);

    const auto color_type = png_get_color_type(png, info);
    const auto depth = png_get_bit_depth(png, info);

    if (target == PngTarget::Rgb8) {
        if (depth == 16) png_set_strip_16(png);
        if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
        if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
        out.channels = 3;
        out.bit_depth = 8;
    } else {
        if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_GRAY_ALPHA) {
            unsupported = true;
            failure = "heatmap PNG must be grayscale";
            png_error(png, "unsupported");
        }
        if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
        out.channels = 1;
        out.bit_depth = depth == 16 ? 16 : 8;
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out.width = png_get_image_width(png, info);
    out.height = png_get_image_height(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    const std::size_t expected = out.width * static_cast<std::size_t>(out.channels) * (out.bit_depth / 8);
    if (rowbytes != expected) {
        unsupported = true;
        failure = "unexpected PNG row layout";
        png_error(png, "unsupported");
    }
    out.samples.resize(rowbytes * out.height);
    rows.resize(out.height);
    for (std::size_t r = 0; r < out.height; ++r) rows[r] = out.samples.data() + r * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

inline void png_write_to_vector(png_structp png, png_bytep data, png_size_t len)
{
    auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

inline void png_flush_noop(png_structp) {}

// Skips whitespace and '#' comments in a PPM header.
inline bool ppm_next_token(std::string_view text, std::size_t& pos, std::string& token)
{
    token.clear();
    while (pos < text.size()) {
        if (text[pos] == '#') {
            while (pos < text.size() && text[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '#')
        token.push_back(text[pos++]);
    return !token.empty();
}

inline std::size_t parse_ppm_number(const std::string& token)
{
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw Error(ErrorCode::CorruptData, "malformed PPM header");
    return std::stoul(token);
}

inline ImageRGB decode_ppm(std::span<const std::uint8_t> data)
{
    std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
    std::size_t pos = 0;
    std::string tok;
    ppm_next_token(text, pos, tok);
    const bool binary = tok == "P6";

    std::size_t dims[3];
    for (auto& d : dims) {
        if (!ppm_next_token(text, pos, tok)) throw Error(ErrorCode::CorruptData, "truncated PPM header");
        d = parse_ppm_number(tok);
    }
    const auto [width, height, maxval] = std::tuple{dims[0], dims[1], dims[2]};
    if (width == 0 || height == 0 || maxval == 0 || maxval > 255)
        throw Error(ErrorCode::UnsupportedFormat, "PPM must be 8-bit with non-zero dimensions");

    auto scale = [maxval](std::size_t v) {
        if (v > maxval) throw Error(ErrorCode::CorruptData, "PPM sample exceeds maxval");
        return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    };

    std::vector<Rgb> px(width * height);
    if (binary) {
        ++pos; // single whitespace after maxval
        if (data.size() < pos + px.size() * 3) throw Error(ErrorCode::CorruptData, "truncated PPM pixel data");
        for (std::size_t i = 0; i < px.size(); ++i) {
            const auto* p = data.data() + pos + i * 3;
            px[i] = {scale(p[0]), scale(p[1]), scale(p[2])};
        }
    } else {
        for (auto& p : px) {
            std::uint8_t ch[3];
            for (auto& c : ch) {
                if (!ppm_next_token(text, pos, tok)) throw Error(ErrorCode::CorruptData, "truncated PPM pixel data");
                c = scale(parse_ppm_number(tok));
            }
            p = {ch[0], ch[1], ch[2]};
        }
    }
    return ImageRGB(width, height, std::move(px));
}

inline bool has_ppm_signature(std::span<const std::uint8_t> data)
{
    return data.size() >= 2 && data[0] == 'P' && (data[1] == '3' || data[1] == '6');
}

} // namespace detail

inline Bytes read_file(const std::filesystem::path& path)
{
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw Error(ErrorCode::FileNotFound, "file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open file: " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

/// Decodes an 8-bit PNG (RGB, RGBA, gray, palette; alpha discarded) or a
/// P3/P6 portable pixmap.
inline ImageRGB decode_image(std::span<const std::uint8_t> data)
{
    if (detail::has_png_signature(data)) {
        auto png = detail::decode_png(data, detail::PngTarget::Rgb8);
        std::vector<Rgb> px(png.width * png.height);
        for (std::size_t i = 0; i < px.size(); ++i)
            px[i] = {png.samples[i * 3], png.samples[i * 3 + 1], png.samples[i * 3 + 2]};
        return ImageRGB(png.width, png.height, std::move(px));
    }
    if (detail::has_ppm_signature(data)) return detail::decode_ppm(data);
    throw Error(ErrorCode::UnsupportedFormat, "image is neither PNG nor PPM");
}

inline ImageRGB load_image(const std::filesystem::path& path)
{
    return decode_image(read_file(path));
}

/// Parses comma-separated floats, one raster row per line. Values are not
/// validated here; see normalize().
inline RawRaster parse_csv_raster(std::string_view text)
{
    RawRaster raw;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        auto line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        std::string_view line = text.substr(line_start, line_end - line_start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line_start = line_end + 1;

        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        std::size_t cols = 0;
        std::size_t cell_start = 0;
        while (true) {
            auto comma = line.find(',', cell_start);
            std::string cell(line.substr(cell_start, comma == std::string_view::npos ? std::string_view::npos : comma - cell_start));
            const char* begin = cell.c_str();
            while (*begin == ' ' || *begin == '\t') ++begin;
            char* end = nullptr;
            errno = 0;
            double v = std::strtod(begin, &end);
            if (end == begin) throw Error(ErrorCode::CorruptData, "CSV cell is not a number: '" + cell + "'");
            while (*end == ' ' || *end == '\t') ++end;
            if (*end != '\0') throw Error(ErrorCode::CorruptData, "CSV cell is not a number: '" + cell + "'");
            raw.values.push_back(v);
            ++cols;
            if (comma == std::string_view::npos) break;
            cell_start = comma + 1;
        }
        if (raw.height == 0)
            raw.width = cols;
        else if (cols != raw.width)
            throw Error(ErrorCode::NonRectangular,
                        "CSV row " + std::to_string(raw.height + 1) + " has " + std::to_string(cols) +
                            " values, expected " + std::to_string(raw.width));
        ++raw.height;
        if (line_end == text.size()) break;
    }
    if (raw.height == 0 || raw.width == 0) throw Error(ErrorCode::CorruptData, "CSV heatmap is empty");
    return raw;
}

/// Grayscale PNG intensities are divided by 255 or 65535; anything else is
/// parsed as CSV and clamped to [0, 1].
inline Heatmap decode_heatmap(std::span<const std::uint8_t> data)
{
    if (detail::has_png_signature(data)) {
        auto png = detail::decode_png(data, detail::PngTarget::Gray);
        std::vector<double> values(png.width * png.height);
        if (png.bit_depth == 16) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                const unsigned v = (static_cast<unsigned>(png.samples[2 * i]) << 8) | png.samples[2 * i + 1];
                values[i] = v / 65535.0;
            }
        } else {
            for (std::size_t i = 0; i < values.size(); ++i) values[i] = png.samples[i] / 255.0;
        }
        return Heatmap(png.width, png.height, std::move(values));
    }
    const bool textual = std::all_of(data.begin(), data.end(), [](std::uint8_t c) {
        return c == '\n' || c == '\r' || c == '\t' || (c >= 0x20 && c < 0x7f);
    });
    if (!textual || data.empty()) throw Error(ErrorCode::UnsupportedFormat, "heatmap is neither PNG nor CSV");
    std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
    return normalize(parse_csv_raster(text), NormalizeMode::Clamp);
}

inline Heatmap load_heatmap(const std::filesystem::path& path)
{
    return decode_heatmap(read_file(path));
}

inline Bytes encode_png(const ImageRGB& image)
{
    Bytes out;
    std::vector<png_bytep> rows(image.height());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, detail::png_silent_warning);
    if (!png) throw Error(ErrorCode::CorruptData, "libpng: cannot allocate write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::CorruptData, "libpng: cannot allocate info struct");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::CorruptData, "PNG encoding failed");
    }
    png_set_write_fn(png, &out, detail::png_write_to_vector, detail::png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    // Rgb is three packed bytes, so the pixel buffer is already the row layout.
    static_assert(sizeof(Rgb) == 3);
    auto* base = const_cast<png_bytep>(reinterpret_cast<const std::uint8_t*>(image.pixels().data()));
    for (std::size_t r = 0; r < image.height(); ++r) rows[r] = base + r * image.width() * 3;
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

inline void save_png(const ImageRGB& image, const std::filesystem::path& path)
{
    write_file(path, encode_png(image));
}

} // namespace heatcap
