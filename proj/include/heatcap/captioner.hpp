#pragma once

#include "heatcap/attributes.hpp"
#include "heatcap/error.hpp"

#include <json.hpp>

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace heatcap {

struct Caption {
    std::string text;
    std::vector<ObjectAttributes> per_object;

    friend bool operator==(const Caption&, const Caption&) = default;
};

struct CaptionOptions {
    /// "It is an apple." instead of the literal "It is a apple.".
    bool article_adjust = false;
};

/// One..twelve as words, digits beyond.
inline std::string count_word(std::size_t n)
{
    static constexpr std::array<const char*, 13> words{"zero", "one", "two",   "three", "four",   "five",  "six",
                                                        "seven", "eight", "nine", "ten",  "eleven", "twelve"};
    return n < words.size() ? words[n] : std::to_string(n);
}

/// fraction * 100 with exactly two decimals, half away from zero.
inline std::string format_percent(double fraction)
{
    const long long hundredths = std::llround(fraction * 10000.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", hundredths < 0 ? "-" : "", std::llabs(hundredths) / 100,
                  std::llabs(hundredths) % 100);
    return buf;
}

namespace detail {

inline std::string salient_sentence(const std::vector<PositionName>& regions)
{
    const auto name = [&](std::size_t i) { return std::string(to_string(regions[i])); };
    switch (regions.size()) {
    case 0: return {};
    case 1: return "Its " + name(0) + " part is mostly considered important by the model.";
    case 2: return "Its " + name(0) + " and " + name(1) + " parts are mostly considered important by the model.";
    default:
        return "Its " + name(0) + ", " + name(1) + " and " + name(2) + " parts are mostly considered important by the model.";
    }
}

inline std::string colour_sentence(const std::vector<ColorShare>& colors)
{
    switch (colors.size()) {
    case 0: return {};
    case 1: return "The main colour of it and its background is " + colors[0].name + ".";
    case 2: return "The main colours of it and its background are " + colors[0].name + " and " + colors[1].name + ".";
    default:
        return "The main colours of it and its background are " + colors[0].name + ", " + colors[1].name + ", and " +
               colors[2].name + ".";
    }
}

inline std::string article_for(const std::string& label, bool adjust)
{
    if (!adjust || label.empty()) return "a";
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(label.front())));
    return std::string("aeiou").find(c) != std::string::npos ? "an" : "a";
}

} // namespace detail

inline Caption render_caption(const std::vector<ObjectAttributes>& objects, const CaptionOptions& opts = {})
{
    std::string text;
    if (objects.empty()) {
        text = "In this image, no objects are detected under the heatmap.";
        return {text, objects};
    }

    const bool plural = objects.size() > 1;
    text = "In this image, " + count_word(objects.size()) + (plural ? " objects are" : " object is") +
           " detected under the heatmap.";

    auto append = [&text](const std::string& sentence) {
        if (sentence.empty()) return;
        text += ' ';
        text += sentence;
    };
    for (const auto& obj : objects) {
        append("Object " + std::to_string(obj.object_id) + " is located on the " + std::string(to_string(obj.position)) +
               " side of the image.");
        append("It occupies " + format_percent(obj.area_fraction) + "% of the image.");
        append("It is " + detail::article_for(obj.identity.label, opts.article_adjust) + " " + obj.identity.label + ".");
        append(detail::salient_sentence(obj.salient_regions));
        append(detail::colour_sentence(obj.dominant_colors));
    }
    return {text, objects};
}

inline nlohmann::json attributes_to_json(const ObjectAttributes& a)
{
    nlohmann::json salient = nlohmann::json::array();
    for (auto p : a.salient_regions) salient.push_back(std::string(to_string(p)));
    nlohmann::json colors = nlohmann::json::array();
    for (const auto& c : a.dominant_colors) colors.push_back({{"name", c.name}, {"pct", c.pct}});
    return {
        {"id", a.object_id},
        {"label", a.identity.label},
        {"score", a.identity.score},
        {"position", std::string(to_string(a.position))},
        {"area_fraction", a.area_fraction},
        {"salient_regions", std::move(salient)},
        {"dominant_colors", std::move(colors)},
        {"bbox", {{"x", a.bbox.x}, {"y", a.bbox.y}, {"w", a.bbox.w}, {"h", a.bbox.h}}},
    };
}

inline ObjectAttributes attributes_from_json(const nlohmann::json& j)
{
    auto position = [](const nlohmann::json& v) {
        auto p = parse_position(v.get<std::string>());
        if (!p) throw Error(ErrorCode::InvalidData, "unknown position name: " + v.get<std::string>());
        return *p;
    };
    ObjectAttributes a;
    try {
        a.object_id = j.at("id").get<std::size_t>();
        a.identity = {j.at("label").get<std::string>(), j.at("score").get<double>()};
        a.position = position(j.at("position"));
        a.area_fraction = j.at("area_fraction").get<double>();
        for (const auto& s : j.at("salient_regions")) a.salient_regions.push_back(position(s));
        for (const auto& c : j.at("dominant_colors"))
            a.dominant_colors.push_back({c.at("name").get<std::string>(), c.at("pct").get<double>()});
        if (j.contains("bbox")) {
            const auto& b = j.at("bbox");
            a.bbox = {b.at("x").get<std::size_t>(), b.at("y").get<std::size_t>(), b.at("w").get<std::size_t>(),
                      b.at("h").get<std::size_t>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidData, std::string("caption JSON: ") + e.what());
    }
    return a;
}

inline nlohmann::json caption_to_json(const Caption& c)
{
    nlohmann::json objects = nlohmann::json::array();
    for (const auto& a : c.per_object) objects.push_back(attributes_to_json(a));
    return {{"text", c.text}, {"objects", std::move(objects)}};
}

inline Caption caption_from_json(const nlohmann::json& j)
{
    Caption c;
    try {
        c.text = j.at("text").get<std::string>();
        for (const auto& o : j.at("objects")) c.per_object.push_back(attributes_from_json(o));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidData, std::string("caption JSON: ") + e.what());
    }
    return c;
}

} // namespace heatcap
