#pragma once

// HTTP API over the captioning and reasoning pipeline.
//
//   GET  /api/health   -> {"status":"ok"}
//   POST /api/caption  multipart image, heatmap[, config, threshold]
//   POST /api/report   multipart image, heatmap..., provenance, question[, config, threshold]
//   POST /api/chat     JSON {"session_id"?, "message"}
//
// Errors carry {"error": code, "stage": stage, "message": text}: 400 for
// malformed uploads, 404 for unknown chat sessions, 422 for pipeline
// failures, 502 for upstream LLM failures.

#include "heatcap/config.hpp"
#include "heatcap/error.hpp"
#include "heatcap/overlay.hpp"
#include "heatcap/pipeline.hpp"
#include "heatcap/raster_io.hpp"
#include "heatcap/reasoning.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

namespace heatcap {

namespace detail {

inline int http_status_for(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::FileNotFound:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::CorruptData:
    case ErrorCode::InvalidData:
    case ErrorCode::NonRectangular:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidConfig:
        return 400;
    case ErrorCode::Timeout:
    case ErrorCode::HttpError:
    case ErrorCode::MalformedResponse:
    case ErrorCode::AuthMissing:
        return e.stage() == Stage::Reasoning ? 502 : 422;
    default:
        return 422;
    }
}

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, std::string_view code, std::string_view stage,
                       std::string_view message)
{
    send_json(res, status, {{"error", code}, {"stage", stage}, {"message", message}});
}

inline void send_error(httplib::Response& res, const Error& e)
{
    send_error(res, http_status_for(e), to_string(e.code()), to_string(e.stage()), e.what());
}

inline constexpr const char* kPlaceholderIndex =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>heatcap</title></head>"
    "<body><h1>heatcap</h1><p>The web UI assets are not installed. Set <code>static_dir</code> in the "
    "config to serve them. The JSON API is available under <code>/api</code>.</p></body></html>";

} // namespace detail

class Service {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit Service(PipelineConfig cfg, Clock clock = [] { return std::chrono::steady_clock::now(); })
        : cfg_(std::move(cfg)), classifier_(make_classifier(cfg_.classifier)), clock_(std::move(clock)),
          rng_(std::random_device{}())
    {
        cfg_.validate();
        routes();
    }

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds an ephemeral port and returns it.
    int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
    bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
    /// Blocks until stop().
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void wait_until_ready() const { server_.wait_until_ready(); }
    void stop() { server_.stop(); }

    std::size_t session_count()
    {
        std::lock_guard lock(sessions_mutex_);
        expire_sessions();
        return sessions_.size();
    }

private:
    struct SessionEntry {
        std::mutex mutex;
        ChatSession chat;
        std::chrono::steady_clock::time_point last_used; ///< guarded by sessions_mutex_
    };

    struct Upload {
        ImageRGB image;
        std::vector<Heatmap> heatmaps;
        PipelineConfig cfg;
        std::shared_ptr<const Classifier> classifier;
    };

    void routes()
    {
        server_.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
            detail::send_json(res, 200, {{"status", "ok"}});
        });
        server_.Post("/api/caption", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { handle_caption(req, res); });
        });
        server_.Post("/api/report", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { handle_report(req, res); });
        });
        server_.Post("/api/chat", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { handle_chat(req, res); });
        });

        std::error_code ec;
        if (!cfg_.static_dir.empty() && std::filesystem::is_directory(cfg_.static_dir, ec)) {
            server_.set_mount_point("/", cfg_.static_dir);
        } else {
            server_.Get("/", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(detail::kPlaceholderIndex, "text/html");
            });
        }
    }

    template <typename F>
    static void guarded(httplib::Response& res, F&& f)
    {
        try {
            f();
        } catch (const Error& e) {
            detail::send_error(res, e);
        } catch (const std::exception& e) {
            detail::send_error(res, 500, "internal", "", e.what());
        }
    }

    static const httplib::MultipartFormData* field(const httplib::Request& req, const std::string& name)
    {
        auto it = req.files.find(name);
        return it == req.files.end() ? nullptr : &it->second;
    }

    static std::span<const std::uint8_t> bytes_of(const std::string& s)
    {
        return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
    }

    static Error bad_upload(const std::string& message) { return Error(ErrorCode::InvalidArgument, message, Stage::Raster); }

    Upload parse_upload(const httplib::Request& req) const
    {
        if (!req.is_multipart_form_data()) throw bad_upload("expected multipart/form-data");
        const auto* image = field(req, "image");
        if (!image) throw bad_upload("missing 'image' part");
        const auto heatmaps = req.get_file_values("heatmap");
        if (heatmaps.empty()) throw bad_upload("missing 'heatmap' part");

        auto decode = [](auto&& f) {
            try {
                return f();
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), Stage::Raster);
            }
        };

        Upload up{decode([&] { return decode_image(bytes_of(image->content)); }), {}, cfg_, classifier_};
        for (const auto& h : heatmaps) up.heatmaps.push_back(decode([&] { return decode_heatmap(bytes_of(h.content)); }));

        bool classifier_changed = false;
        if (const auto* overrides = field(req, "config"); overrides && !overrides->content.empty()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(overrides->content);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorCode::InvalidConfig, std::string("config override: ") + e.what(), Stage::Config);
            }
            apply_config_json(up.cfg, j);
            classifier_changed = j.contains("classifier");
        }
        if (const auto* t = field(req, "threshold"); t && !t->content.empty()) {
            try {
                up.cfg.caption.threshold = std::stod(t->content);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidConfig, "threshold must be a number", Stage::Config);
            }
            up.cfg.validate();
        }
        if (classifier_changed) up.classifier = make_classifier(up.cfg.classifier);
        return up;
    }

    static std::string text_field(const httplib::Request& req, const std::string& name)
    {
        const auto* f = field(req, name);
        return f ? f->content : std::string{};
    }

    void handle_caption(const httplib::Request& req, httplib::Response& res) const
    {
        auto up = parse_upload(req);
        if (up.heatmaps.size() != 1) throw bad_upload("/api/caption takes exactly one heatmap");
        auto result = caption_heatmap(up.image, up.heatmaps.front(), up.cfg.caption, *up.classifier, "Heatmap1");
        const auto overlay = encode_png(render_overlay(up.image, result.heatmap, result.regions));
        detail::send_json(res, 200,
                          {{"caption", caption_to_json(result.caption)},
                           {"overlay_png_base64",
                            net::base64_encode({reinterpret_cast<const char*>(overlay.data()), overlay.size()})}});
    }

    void handle_report(const httplib::Request& req, httplib::Response& res)
    {
        auto up = parse_upload(req);
        ReportRequest request{text_field(req, "provenance"), text_field(req, "question")};
        if (request.question.empty()) throw Error(ErrorCode::InvalidArgument, "missing 'question' part", Stage::Reasoning);

        auto report = generate_report(up.image, label_heatmaps(std::move(up.heatmaps)), request, up.cfg.caption,
                                      *up.classifier, up.cfg.llm);

        auto entry = std::make_shared<SessionEntry>();
        entry->chat.add_user(report.prompt);
        entry->chat.add_assistant(report.response);
        const auto id = store_session(entry);

        auto body = report_to_json(report);
        body["session_id"] = id;
        detail::send_json(res, 200, body);
    }

    void handle_chat(const httplib::Request& req, httplib::Response& res)
    {
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::InvalidArgument, "chat body must be JSON", Stage::Reasoning);
        }
        if (!body.is_object() || !body.contains("message") || !body["message"].is_string() ||
            body["message"].get<std::string>().empty())
            throw Error(ErrorCode::InvalidArgument, "chat body needs a non-empty 'message'", Stage::Reasoning);

        std::string id;
        std::shared_ptr<SessionEntry> entry;
        if (body.contains("session_id") && !body["session_id"].is_null()) {
            id = body["session_id"].get<std::string>();
            entry = find_session(id);
            if (!entry) {
                detail::send_error(res, 404, "session-unknown", "reasoning", "unknown or expired session");
                return;
            }
        } else {
            entry = std::make_shared<SessionEntry>();
            id = store_session(entry);
        }

        std::lock_guard lock(entry->mutex);
        // Work on a copy so a failed turn leaves the transcript unchanged.
        ChatSession next = entry->chat;
        next.add_user(body["message"].get<std::string>());
        const auto reply = send(next, cfg_.llm);
        entry->chat = std::move(next);
        touch(*entry);

        nlohmann::json messages = nlohmann::json::array();
        for (const auto& m : entry->chat.messages())
            messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
        detail::send_json(res, 200, {{"session_id", id}, {"reply", reply}, {"messages", std::move(messages)}});
    }

    std::string store_session(std::shared_ptr<SessionEntry> entry)
    {
        std::lock_guard lock(sessions_mutex_);
        expire_sessions();
        entry->last_used = clock_();
        std::string id;
        do {
            char buf[33];
            std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                          static_cast<unsigned long long>(rng_()));
            id = buf;
        } while (sessions_.count(id));
        sessions_.emplace(id, std::move(entry));
        return id;
    }

    std::shared_ptr<SessionEntry> find_session(const std::string& id)
    {
        std::lock_guard lock(sessions_mutex_);
        expire_sessions();
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return nullptr;
        it->second->last_used = clock_();
        return it->second;
    }

    void touch(SessionEntry& entry)
    {
        std::lock_guard lock(sessions_mutex_);
        entry.last_used = clock_();
    }

    // Caller holds sessions_mutex_.
    void expire_sessions()
    {
        const auto now = clock_();
        const auto idle = std::chrono::duration<double>(cfg_.session_idle_timeout_s);
        std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_used > idle; });
    }

    PipelineConfig cfg_;
    std::shared_ptr<const Classifier> classifier_;
    Clock clock_;
    httplib::Server server_;
    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
    std::mt19937_64 rng_;
};

} // namespace heatcap
