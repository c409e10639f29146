// heatcap: caption heatmaps, generate XAI reports, chat, or run the HTTP
// service.

#include "heatcap/heatcap.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;

int exit_code(heatcap::ErrorCode code)
{
    using heatcap::ErrorCode;
    switch (code) {
    case ErrorCode::FileNotFound: return 3;
    case ErrorCode::UnsupportedFormat: return 4;
    case ErrorCode::CorruptData: return 5;
    case ErrorCode::InvalidData: return 6;
    case ErrorCode::NonRectangular: return 7;
    case ErrorCode::InvalidArgument: return 8;
    case ErrorCode::InvalidConfig: return 9;
    case ErrorCode::ClassifierUnavailable: return 10;
    case ErrorCode::ProtocolViolation: return 11;
    case ErrorCode::StubMiss: return 12;
    case ErrorCode::Timeout: return 13;
    case ErrorCode::HttpError: return 14;
    case ErrorCode::MalformedResponse: return 15;
    case ErrorCode::AuthMissing: return 16;
    }
    return kExitInternal;
}

constexpr const char* kExitCodeHelp = R"(Exit codes:
  0   success
  1   internal error
  2   usage error
  3   file-not-found
  4   unsupported-format
  5   corrupt-data
  6   invalid-data (NaN/Inf or out-of-range raster values)
  7   non-rectangular CSV heatmap
  8   invalid-argument
  9   invalid-config
  10  classifier-unavailable
  11  protocol-violation (classifier answered with a label outside the label set)
  12  stub-miss (stub sidecar has no entry for an object)
  13  LLM timeout
  14  LLM http-error
  15  LLM malformed-response
  16  LLM auth-missing
)";

struct Options {
    std::string image;
    std::vector<std::string> heatmaps;
    std::string config;
    std::optional<double> threshold;
    std::string question;
    std::string provenance;
    std::string json_out;
    std::string overlay_out;
    std::vector<std::string> caption_overrides;
    std::string bind = "127.0.0.1:8080";
};

heatcap::PipelineConfig make_config(const Options& opt)
{
    heatcap::PipelineConfig cfg = opt.config.empty() ? heatcap::PipelineConfig{} : heatcap::load_config(opt.config);
    if (opt.threshold) {
        cfg.caption.threshold = *opt.threshold;
        cfg.validate();
    }
    return cfg;
}

std::vector<heatcap::HeatmapInput> load_heatmaps(const Options& opt)
{
    std::vector<heatcap::Heatmap> maps;
    for (const auto& path : opt.heatmaps) maps.push_back(heatcap::load_heatmap(path));
    auto inputs = heatcap::label_heatmaps(std::move(maps));

    // INDEX:FILE, 1-based, replaces that heatmap's caption text in the prompt.
    for (const auto& spec : opt.caption_overrides) {
        const auto colon = spec.find(':');
        std::size_t index = 0;
        try {
            index = colon == std::string::npos ? 0 : std::stoul(spec.substr(0, colon));
        } catch (const std::exception&) {
        }
        if (index == 0 || index > inputs.size())
            throw heatcap::Error(heatcap::ErrorCode::InvalidArgument, "bad --caption-override '" + spec + "'");
        std::ifstream in(spec.substr(colon + 1));
        if (!in) throw heatcap::Error(heatcap::ErrorCode::FileNotFound, "cannot read " + spec.substr(colon + 1));
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        inputs[index - 1].caption_override = std::move(text);
    }
    return inputs;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw heatcap::Error(heatcap::ErrorCode::FileNotFound, "cannot write " + path);
    out << text << '\n';
}

int cmd_caption(const Options& opt)
{
    const auto cfg = make_config(opt);
    const auto classifier = heatcap::make_classifier(cfg.classifier);
    const auto image = heatcap::load_image(opt.image);
    auto inputs = load_heatmaps(opt);

    nlohmann::json dump = nlohmann::json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& in = inputs[i];
        auto result = heatcap::caption_heatmap(image, in.heatmap, cfg.caption, *classifier, in.label);
        if (inputs.size() > 1) std::cout << in.label << ": ";
        std::cout << result.caption.text << '\n';
        dump.push_back({{"label", in.label}, {"caption", heatcap::caption_to_json(result.caption)}});

        if (!opt.overlay_out.empty()) {
            std::string path = opt.overlay_out;
            if (inputs.size() > 1) {
                const auto dot = path.rfind('.');
                const auto suffix = "-" + std::to_string(i + 1);
                path = dot == std::string::npos ? path + suffix : path.substr(0, dot) + suffix + path.substr(dot);
            }
            heatcap::save_png(heatcap::render_overlay(image, result.heatmap, result.regions), path);
        }
    }
    if (!opt.json_out.empty()) write_text(opt.json_out, (inputs.size() == 1 ? dump[0]["caption"] : dump).dump(2));
    return 0;
}

int cmd_report(const Options& opt)
{
    const auto cfg = make_config(opt);
    const auto classifier = heatcap::make_classifier(cfg.classifier);
    const auto image = heatcap::load_image(opt.image);
    const auto report = heatcap::generate_report(image, load_heatmaps(opt), {opt.provenance, opt.question},
                                                  cfg.caption, *classifier, cfg.llm);
    std::cout << report.response << '\n';
    if (!opt.json_out.empty()) write_text(opt.json_out, heatcap::report_to_json(report).dump(2));
    return 0;
}

int cmd_chat(const Options& opt)
{
    const auto cfg = make_config(opt);
    const auto classifier = heatcap::make_classifier(cfg.classifier);
    const auto image = heatcap::load_image(opt.image);
    const auto report = heatcap::generate_report(image, load_heatmaps(opt), {opt.provenance, opt.question},
                                                  cfg.caption, *classifier, cfg.llm);
    heatcap::ChatSession session;
    session.add_user(report.prompt);
    session.add_assistant(report.response);
    std::cout << report.response << '\n' << std::flush;

    for (std::string line; std::getline(std::cin, line);) {
        if (line.empty()) continue;
        session.add_user(line);
        std::cout << heatcap::send(session, cfg.llm) << '\n' << std::flush;
    }
    return 0;
}

int cmd_serve(const Options& opt)
{
    const auto colon = opt.bind.rfind(':');
    if (colon == std::string::npos)
        throw heatcap::Error(heatcap::ErrorCode::InvalidArgument, "--bind must be host:port");
    const auto host = opt.bind.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(opt.bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw heatcap::Error(heatcap::ErrorCode::InvalidArgument, "--bind port is not a number");
    }

    heatcap::Service service(make_config(opt));
    if (!service.bind(host, port))
        throw heatcap::Error(heatcap::ErrorCode::InvalidArgument, "cannot bind " + opt.bind);
    std::cerr << "heatcap: listening on http://" << opt.bind << '\n';
    service.listen_after_bind();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heatmap captioning and XAI report generation"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);

    Options opt;
    auto add_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--image", opt.image, "Source image (PNG or PPM)")->required();
        cmd->add_option("--heatmap", opt.heatmaps, "Heatmap (grayscale PNG or CSV); repeat for Heatmap1..N")->required();
        cmd->add_option("--config", opt.config, "Pipeline config JSON");
        cmd->add_option("--threshold", opt.threshold, "Object threshold in [0, 1]; overrides the config");
    };
    auto add_question = [&](CLI::App* cmd) {
        cmd->add_option("--question", opt.question, "Question for the language model")->required();
        cmd->add_option("--provenance", opt.provenance, "How the heatmaps were generated");
        cmd->add_option("--caption-override", opt.caption_overrides,
                        "INDEX:FILE replaces caption INDEX (1-based) in the prompt with FILE's text");
    };

    auto* caption = app.add_subcommand("caption", "Print the caption for each heatmap");
    add_inputs(caption);
    caption->add_option("--json", opt.json_out, "Write the structured caption JSON here");
    caption->add_option("--overlay", opt.overlay_out, "Write the heatmap overlay PNG here");

    auto* report = app.add_subcommand("report", "Generate an XAI report with the configured LLM");
    add_inputs(report);
    add_question(report);
    report->add_option("--json", opt.json_out, "Write the report JSON here");

    auto* chat = app.add_subcommand("chat", "Start an interactive session seeded with the report prompt");
    add_inputs(chat);
    add_question(chat);

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--config", opt.config, "Pipeline config JSON");
    serve->add_option("--threshold", opt.threshold, "Object threshold in [0, 1]; overrides the config");
    serve->add_option("--bind", opt.bind, "host:port to listen on")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*caption) return cmd_caption(opt);
        if (*report) return cmd_report(opt);
        if (*chat) return cmd_chat(opt);
        if (*serve) return cmd_serve(opt);
    } catch (const heatcap::Error& e) {
        std::cerr << "heatcap: " << heatcap::to_string(e.code());
        if (e.stage() != heatcap::Stage::None) std::cerr << " [" << heatcap::to_string(e.stage()) << "]";
        std::cerr << ": " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "heatcap: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
