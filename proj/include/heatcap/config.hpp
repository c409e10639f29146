#pragma once

// JSON pipeline configuration shared by the CLI and the HTTP service.
// Relative paths are resolved against the config file's directory.

#include "heatcap/classifier.hpp"
#include "heatcap/colornames.hpp"
#include "heatcap/error.hpp"
#include "heatcap/pipeline.hpp"
#include "heatcap/reasoning.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

namespace heatcap {

struct PipelineConfig {
    CaptionSettings caption;
    ClassifierRef classifier;
    std::string color_table = "default"; ///< "default" or a path
    LlmConfig llm;
    double session_idle_timeout_s = 1800.0;
    std::string static_dir; ///< web UI assets served at /

    void validate() const
    {
        if (!(caption.threshold >= 0 && caption.threshold <= 1))
            throw Error(ErrorCode::InvalidConfig, "threshold must be in [0, 1]", Stage::Config);
        if (!(caption.min_area_fraction >= 0 && caption.min_area_fraction <= 1))
            throw Error(ErrorCode::InvalidConfig, "min_area_fraction must be in [0, 1]", Stage::Config);
        if (!(session_idle_timeout_s > 0))
            throw Error(ErrorCode::InvalidConfig, "session_idle_timeout_s must be positive", Stage::Config);
        if (classifier.label_set.empty())
            throw Error(ErrorCode::InvalidConfig, "classifier label set is empty", Stage::Config);
        llm.validate();
    }
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

inline Connectivity parse_connectivity(int v)
{
    if (v == 4) return Connectivity::Four;
    if (v == 8) return Connectivity::Eight;
    throw Error(ErrorCode::InvalidConfig, "connectivity must be 4 or 8", Stage::Config);
}

inline NormalizeMode parse_normalize_mode(const std::string& s)
{
    if (s == "minmax") return NormalizeMode::MinMax;
    if (s == "clamp") return NormalizeMode::Clamp;
    throw Error(ErrorCode::InvalidConfig, "normalize_mode must be minmax or clamp", Stage::Config);
}

inline ClassifierKind parse_classifier_kind(const std::string& s)
{
    if (s == "remote") return ClassifierKind::Remote;
    if (s == "stub") return ClassifierKind::Stub;
    if (s == "constant") return ClassifierKind::Constant;
    throw Error(ErrorCode::InvalidConfig, "classifier.kind must be remote, stub or constant", Stage::Config);
}

} // namespace detail

/// Overlays keys present in j onto cfg. base_dir anchors relative paths.
inline void apply_config_json(PipelineConfig& cfg, const nlohmann::json& j, const std::filesystem::path& base_dir = {})
{
    try {
        if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object", Stage::Config);
        if (j.contains("threshold")) cfg.caption.threshold = j.at("threshold").get<double>();
        if (j.contains("connectivity")) cfg.caption.connectivity = detail::parse_connectivity(j.at("connectivity").get<int>());
        if (j.contains("min_area_fraction")) cfg.caption.min_area_fraction = j.at("min_area_fraction").get<double>();
        if (j.contains("normalize_mode"))
            cfg.caption.normalize_mode = detail::parse_normalize_mode(j.at("normalize_mode").get<std::string>());
        if (j.contains("article_adjust")) cfg.caption.caption.article_adjust = j.at("article_adjust").get<bool>();
        if (j.contains("color_table")) {
            const auto t = j.at("color_table").get<std::string>();
            cfg.color_table = t == "default" ? t : detail::resolve(base_dir, t).string();
            cfg.caption.color_table = t == "default" ? default_color_table() : load_color_table(cfg.color_table);
        }
        if (j.contains("session_idle_timeout_s")) cfg.session_idle_timeout_s = j.at("session_idle_timeout_s").get<double>();
        if (j.contains("static_dir")) cfg.static_dir = detail::resolve(base_dir, j.at("static_dir").get<std::string>()).string();

        if (j.contains("classifier")) {
            const auto& c = j.at("classifier");
            auto& ref = cfg.classifier;
            if (c.contains("kind")) ref.kind = detail::parse_classifier_kind(c.at("kind").get<std::string>());
            if (c.contains("endpoint")) ref.endpoint = c.at("endpoint").get<std::string>();
            if (c.contains("labels_file")) ref.label_set = load_labels(detail::resolve(base_dir, c.at("labels_file").get<std::string>()));
            if (c.contains("labels")) ref.label_set = c.at("labels").get<std::vector<std::string>>();
            if (c.contains("sidecar")) ref.sidecar = detail::resolve(base_dir, c.at("sidecar").get<std::string>());
            if (c.contains("fixed_label")) ref.fixed_label = c.at("fixed_label").get<std::string>();
            if (c.contains("timeout_s")) ref.timeout_s = c.at("timeout_s").get<double>();
        }

        if (j.contains("llm")) {
            const auto& l = j.at("llm");
            auto& llm = cfg.llm;
            if (l.contains("base_url")) llm.base_url = l.at("base_url").get<std::string>();
            if (l.contains("model")) llm.model = l.at("model").get<std::string>();
            if (l.contains("auth_env_var")) llm.auth_env_var = l.at("auth_env_var").get<std::string>();
            if (l.contains("timeout_s")) llm.timeout_s = l.at("timeout_s").get<double>();
            if (l.contains("max_retries")) llm.max_retries = l.at("max_retries").get<int>();
            if (l.contains("backoff_base_s")) llm.backoff_base_s = l.at("backoff_base_s").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what(), Stage::Config);
    } catch (const Error& e) {
        throw e.with_stage(Stage::Config);
    }
    cfg.validate();
}

inline PipelineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "config not found: " + path.string(), Stage::Config);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what(), Stage::Config);
    }
    PipelineConfig cfg;
    apply_config_json(cfg, j, path.parent_path());
    return cfg;
}

} // namespace heatcap
