#pragma once

// HSV -> semantic color name. The default table has 3 achromatic names plus
// 10 hue bins x 3 saturation tiers x 3 value tiers = 93 names, built from a
// "<saturation> <value> <hue>" modifier grammar with empty modifiers omitted.

#include "heatcap/error.hpp"
#include "heatcap/raster.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace heatcap {

using ColorName = std::string;

struct HueBin {
    std::string name;
    double start = 0.0; ///< inclusive, degrees
    double end = 0.0;   ///< exclusive, degrees; end < start wraps through 0

    bool contains(double hue) const noexcept
    {
        if (start <= end) return hue >= start && hue < end;
        return hue >= start || hue < end;
    }
};

/// Tier i covers (max of tier i-1, max]; the first tier starts at the
/// achromatic cut-off.
struct Tier {
    std::string word; ///< modifier word; empty for the middle tier
    double max = 1.0;
};

struct ColorTable {
    double v_black = 0.15;
    double s_grey = 0.10;
    double v_white = 0.90;
    std::string black = "black";
    std::string grey = "grey";
    std::string white = "white";
    std::vector<HueBin> hue_bins;
    std::vector<Tier> saturation_tiers;
    std::vector<Tier> value_tiers;

    static constexpr std::size_t kNameCount = 93;
};

namespace detail {

inline std::string join_color_words(const std::string& sat, const std::string& val, const std::string& hue)
{
    std::string out;
    for (const auto* w : {&sat, &val, &hue}) {
        if (w->empty()) continue;
        if (!out.empty()) out += ' ';
        out += *w;
    }
    return out;
}

inline std::size_t tier_index(const std::vector<Tier>& tiers, double x) noexcept
{
    for (std::size_t i = 0; i < tiers.size(); ++i)
        if (x <= tiers[i].max) return i;
    return tiers.size() - 1;
}

} // namespace detail

/// All names in canonical order: achromatics, then hue-major, saturation
/// tier, value tier. This is the tie-break order for dominant colors.
inline std::vector<ColorName> list_names(const ColorTable& table)
{
    std::vector<ColorName> names{table.black, table.grey, table.white};
    for (const auto& bin : table.hue_bins)
        for (const auto& sat : table.saturation_tiers)
            for (const auto& val : table.value_tiers)
                names.push_back(detail::join_color_words(sat.word, val.word, bin.name));
    return names;
}

/// Structural checks: partitions are total and the name count is 93.
inline void validate(const ColorTable& t)
{
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, "color table: " + msg); };

    if (!(t.v_black >= 0 && t.v_black < 1)) fail("v_black must be in [0, 1)");
    if (!(t.s_grey >= 0 && t.s_grey < 1)) fail("s_grey must be in [0, 1)");
    if (!(t.v_white > t.v_black && t.v_white <= 1)) fail("v_white must be in (v_black, 1]");
    if (t.hue_bins.empty() || t.saturation_tiers.empty() || t.value_tiers.empty()) fail("missing bins or tiers");

    double covered = 0.0;
    for (std::size_t i = 0; i < t.hue_bins.size(); ++i) {
        const auto& bin = t.hue_bins[i];
        const auto& next = t.hue_bins[(i + 1) % t.hue_bins.size()];
        if (!(bin.start >= 0 && bin.start < 360 && bin.end >= 0 && bin.end < 360)) fail("hue bounds outside [0, 360)");
        if (bin.end != next.start) fail("hue bin '" + bin.name + "' does not end where the next begins");
        covered += bin.start < bin.end ? bin.end - bin.start : 360.0 - bin.start + bin.end;
    }
    if (covered != 360.0) fail("hue bins do not cover 360 degrees exactly once");

    auto check_tiers = [&](const std::vector<Tier>& tiers, double floor, const char* what) {
        double prev = floor;
        for (const auto& tier : tiers) {
            if (!(tier.max > prev)) fail(std::string(what) + " tiers must be strictly increasing");
            prev = tier.max;
        }
        if (tiers.back().max != 1.0) fail(std::string(what) + " tiers must end at 1");
    };
    check_tiers(t.saturation_tiers, t.s_grey, "saturation");
    check_tiers(t.value_tiers, t.v_black, "value");

    const auto names = list_names(t);
    if (names.size() != ColorTable::kNameCount)
        fail("expected " + std::to_string(ColorTable::kNameCount) + " names, got " + std::to_string(names.size()));
    if (std::set<ColorName>(names.begin(), names.end()).size() != names.size()) fail("names are not distinct");
}

inline const ColorTable& default_color_table()
{
    static const ColorTable table = [] {
        ColorTable t;
        t.hue_bins = {
            {"red", 345, 15},    {"orange", 15, 45},  {"yellow", 45, 70},  {"green", 70, 150},
            {"teal", 150, 190},  {"cyan", 190, 210},  {"blue", 210, 255},  {"purple", 255, 290},
            {"magenta", 290, 320}, {"pink", 320, 345},
        };
        t.saturation_tiers = {{"pale", 0.35}, {"", 0.70}, {"vivid", 1.0}};
        t.value_tiers = {{"dark", 0.40}, {"", 0.75}, {"bright", 1.0}};
        validate(t);
        return t;
    }();
    return table;
}

inline ColorName name_color(const HsvColor& c, const ColorTable& table)
{
    if (c.value <= table.v_black) return table.black;
    if (c.saturation <= table.s_grey) return c.value >= table.v_white ? table.white : table.grey;

    const HueBin* bin = &table.hue_bins.front();
    for (const auto& b : table.hue_bins) {
        if (b.contains(c.hue)) {
            bin = &b;
            break;
        }
    }
    const auto& sat = table.saturation_tiers[detail::tier_index(table.saturation_tiers, c.saturation)];
    const auto& val = table.value_tiers[detail::tier_index(table.value_tiers, c.value)];
    return detail::join_color_words(sat.word, val.word, bin->name);
}

inline ColorName name_color(const HsvColor& c)
{
    return name_color(c, default_color_table());
}

// JSON layout:
// {
//   "achromatic": {"v_black": .., "s_grey": .., "v_white": .., "black": .., "grey": .., "white": ..},
//   "hue_bins": [{"name": .., "start": .., "end": ..}, ...],
//   "saturation_tiers": [{"word": .., "max": ..}, ...],
//   "value_tiers": [{"word": .., "max": ..}, ...]
// }

inline nlohmann::json color_table_to_json(const ColorTable& t)
{
    nlohmann::json j;
    j["achromatic"] = {{"v_black", t.v_black}, {"s_grey", t.s_grey}, {"v_white", t.v_white},
                       {"black", t.black},     {"grey", t.grey},     {"white", t.white}};
    j["hue_bins"] = nlohmann::json::array();
    for (const auto& b : t.hue_bins) j["hue_bins"].push_back({{"name", b.name}, {"start", b.start}, {"end", b.end}});
    for (const char* key : {"saturation_tiers", "value_tiers"}) {
        const auto& tiers = std::string(key) == "saturation_tiers" ? t.saturation_tiers : t.value_tiers;
        j[key] = nlohmann::json::array();
        for (const auto& tier : tiers) j[key].push_back({{"word", tier.word}, {"max", tier.max}});
    }
    return j;
}

inline ColorTable color_table_from_json(const nlohmann::json& j)
{
    ColorTable t;
    try {
        const auto& a = j.at("achromatic");
        t.v_black = a.at("v_black").get<double>();
        t.s_grey = a.at("s_grey").get<double>();
        t.v_white = a.at("v_white").get<double>();
        t.black = a.value("black", t.black);
        t.grey = a.value("grey", t.grey);
        t.white = a.value("white", t.white);
        for (const auto& b : j.at("hue_bins"))
            t.hue_bins.push_back({b.at("name").get<std::string>(), b.at("start").get<double>(), b.at("end").get<double>()});
        for (const auto& s : j.at("saturation_tiers"))
            t.saturation_tiers.push_back({s.at("word").get<std::string>(), s.at("max").get<double>()});
        for (const auto& v : j.at("value_tiers"))
            t.value_tiers.push_back({v.at("word").get<std::string>(), v.at("max").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("color table: ") + e.what());
    }
    validate(t);
    return t;
}

inline ColorTable load_color_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "color table not found: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("color table: ") + e.what());
    }
    return color_table_from_json(j);
}

} // namespace heatcap
