#pragma once

// Prompt assembly and the chat-completions client used to turn heatmap
// captions into XAI reports.

#include "heatcap/captioner.hpp"
#include "heatcap/classifier.hpp"
#include "heatcap/error.hpp"
#include "heatcap/http_util.hpp"
#include "heatcap/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace heatcap {

struct LabeledCaption {
    std::string label; ///< e.g. "Heatmap1"
    std::string text;
};

struct PromptSpec {
    std::string provenance; ///< how the heatmaps were generated; may be empty
    std::vector<LabeledCaption> captions;
    std::string question;
};

/// provenance, caption block, question; joined by single spaces. One caption
/// uses the quoted singular lead-in, several use "{label}: {text}" entries.
inline std::string build_prompt(const PromptSpec& spec)
{
    if (spec.captions.empty()) throw Error(ErrorCode::InvalidArgument, "prompt needs at least one caption", Stage::Reasoning);
    if (spec.question.empty()) throw Error(ErrorCode::InvalidArgument, "prompt question is empty", Stage::Reasoning);

    std::vector<std::string> parts;
    if (!spec.provenance.empty()) parts.push_back(spec.provenance);
    if (spec.captions.size() == 1) {
        parts.push_back("Here is the description of this heatmap: \"" + spec.captions.front().text + "\"");
    } else {
        parts.emplace_back("Here are detailed information about heatmaps:");
        for (const auto& c : spec.captions) parts.push_back(c.label + ": " + c.text);
    }
    parts.push_back(spec.question);

    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out;
}

struct LlmConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-3.5-turbo";
    std::string auth_env_var = "LLM_API_KEY";
    double timeout_s = 60.0;
    int max_retries = 2;
    double backoff_base_s = 1.0; ///< delay before retry n is base * 2^n

    void validate() const
    {
        if (!(timeout_s > 0)) throw Error(ErrorCode::InvalidConfig, "llm.timeout_s must be positive");
        if (max_retries < 0) throw Error(ErrorCode::InvalidConfig, "llm.max_retries must be non-negative");
        if (!(backoff_base_s >= 0)) throw Error(ErrorCode::InvalidConfig, "llm.backoff_base_s must be non-negative");
        net::parse_endpoint(base_url);
    }
};

enum class Role { User, Assistant };

inline std::string_view to_string(Role r) noexcept { return r == Role::User ? "user" : "assistant"; }

struct ChatMessage {
    Role role;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Alternating user/assistant turns, starting with the user.
class ChatSession {
public:
    const std::vector<ChatMessage>& messages() const noexcept { return messages_; }
    bool awaiting_reply() const noexcept { return !messages_.empty() && messages_.back().role == Role::User; }

    void add_user(std::string content)
    {
        if (awaiting_reply()) throw Error(ErrorCode::InvalidArgument, "previous user message has no reply yet");
        messages_.push_back({Role::User, std::move(content)});
    }

    void add_assistant(std::string content)
    {
        if (!awaiting_reply()) throw Error(ErrorCode::InvalidArgument, "assistant reply without a user message");
        messages_.push_back({Role::Assistant, std::move(content)});
    }

private:
    std::vector<ChatMessage> messages_;
};

inline nlohmann::json chat_request_body(const ChatSession& session, const std::string& model)
{
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : session.messages())
        messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    return {{"model", model}, {"messages", std::move(messages)}};
}

/// Reply text at choices[0].message.content.
inline std::string parse_chat_reply(const std::string& body)
{
    try {
        const auto j = nlohmann::json::parse(body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedResponse, std::string("chat response has no reply content: ") + e.what(),
                    Stage::Reasoning);
    }
}

/// POSTs the session to {base_url}/chat/completions, appends the reply and
/// returns it. Connection failures, timeouts, 429 and 5xx are retried up to
/// max_retries times with exponential backoff.
inline std::string send(ChatSession& session, const LlmConfig& cfg)
{
    if (!session.awaiting_reply())
        throw Error(ErrorCode::InvalidArgument, "session must end with a user message", Stage::Reasoning);
    cfg.validate();

    const auto endpoint = net::parse_endpoint(cfg.base_url);
    const auto path = endpoint.path("/chat/completions");
    const auto body = chat_request_body(session, cfg.model).dump();

    httplib::Headers headers;
    if (const char* token = std::getenv(cfg.auth_env_var.c_str()); token && *token)
        headers.emplace("Authorization", std::string("Bearer ") + token);

    std::optional<Error> last;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            const double delay = cfg.backoff_base_s * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }

        auto client = net::make_client(endpoint, cfg.timeout_s);
        auto res = client->Post(path, headers, body, "application/json");
        if (!res) {
            if (net::is_timeout(res.error()))
                last.emplace(ErrorCode::Timeout, "LLM request timed out", Stage::Reasoning);
            else
                last.emplace(ErrorCode::HttpError, "LLM endpoint unreachable: " + httplib::to_string(res.error()),
                             Stage::Reasoning);
            continue;
        }
        if (res->status == 401)
            throw Error(ErrorCode::AuthMissing, "LLM endpoint rejected credentials (set " + cfg.auth_env_var + ")",
                        Stage::Reasoning, 401);
        if (res->status == 429 || res->status >= 500) {
            last.emplace(ErrorCode::HttpError, "LLM endpoint returned HTTP " + std::to_string(res->status),
                         Stage::Reasoning, res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw Error(ErrorCode::HttpError, "LLM endpoint returned HTTP " + std::to_string(res->status),
                        Stage::Reasoning, res->status);

        auto reply = parse_chat_reply(res->body);
        session.add_assistant(reply);
        return reply;
    }
    throw *last;
}

struct ReportCaption {
    std::string label;
    Caption caption;
    std::string prompt_text; ///< caption text used in the prompt (differs when overridden)
};

struct XaiReport {
    std::string prompt;
    std::string response;
    std::vector<ReportCaption> captions;
    std::string created_at; ///< ISO-8601 UTC
    std::string llm_base_url;
    std::string llm_model;
};

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json report_to_json(const XaiReport& r)
{
    nlohmann::json captions = nlohmann::json::array();
    for (const auto& c : r.captions)
        captions.push_back({{"label", c.label}, {"caption", caption_to_json(c.caption)}, {"prompt_text", c.prompt_text}});
    return {
        {"prompt", r.prompt},
        {"response", r.response},
        {"captions", std::move(captions)},
        {"created_at", r.created_at},
        {"llm", {{"base_url", r.llm_base_url}, {"model", r.llm_model}}},
    };
}

inline XaiReport report_from_json(const nlohmann::json& j)
{
    XaiReport r;
    try {
        r.prompt = j.at("prompt").get<std::string>();
        r.response = j.at("response").get<std::string>();
        for (const auto& c : j.at("captions"))
            r.captions.push_back({c.at("label").get<std::string>(), caption_from_json(c.at("caption")),
                                  c.at("prompt_text").get<std::string>()});
        r.created_at = j.at("created_at").get<std::string>();
        r.llm_base_url = j.at("llm").at("base_url").get<std::string>();
        r.llm_model = j.at("llm").at("model").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidData, std::string("report JSON: ") + e.what());
    }
    return r;
}

struct HeatmapInput {
    std::string label;
    Heatmap heatmap;
    std::optional<std::string> caption_override; ///< replaces the generated text in the prompt
};

/// Labels Heatmap1..N in order.
inline std::vector<HeatmapInput> label_heatmaps(std::vector<Heatmap> heatmaps)
{
    std::vector<HeatmapInput> out;
    for (std::size_t i = 0; i < heatmaps.size(); ++i)
        out.push_back({"Heatmap" + std::to_string(i + 1), std::move(heatmaps[i]), std::nullopt});
    return out;
}

struct ReportRequest {
    std::string provenance;
    std::string question;
    std::function<std::string()> clock = utc_timestamp;
};

/// Captions every heatmap, builds the prompt, sends one chat turn.
inline XaiReport generate_report(const ImageRGB& image, const std::vector<HeatmapInput>& heatmaps,
                                 const ReportRequest& request, const CaptionSettings& settings,
                                 const Classifier& classifier, const LlmConfig& llm)
{
    if (heatmaps.empty()) throw Error(ErrorCode::InvalidArgument, "at least one heatmap is required");

    XaiReport report;
    PromptSpec spec{request.provenance, {}, request.question};
    for (const auto& input : heatmaps) {
        auto result = caption_heatmap(image, input.heatmap, settings, classifier, input.label);
        const auto text = input.caption_override.value_or(result.caption.text);
        spec.captions.push_back({input.label, text});
        report.captions.push_back({input.label, std::move(result.caption), text});
    }

    report.prompt = detail::in_stage(Stage::Reasoning, [&] { return build_prompt(spec); });
    ChatSession session;
    session.add_user(report.prompt);
    report.response = detail::in_stage(Stage::Reasoning, [&] { return send(session, llm); });
    report.created_at = request.clock();
    report.llm_base_url = llm.base_url;
    report.llm_model = llm.model;
    return report;
}

} // namespace heatcap
