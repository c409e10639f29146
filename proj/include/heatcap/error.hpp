#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatcap {

enum class ErrorCode {
    FileNotFound,
    UnsupportedFormat,
    CorruptData,
    InvalidData,
    NonRectangular,
    InvalidArgument,
    InvalidConfig,
    ClassifierUnavailable,
    ProtocolViolation,
    StubMiss,
    Timeout,
    HttpError,
    MalformedResponse,
    AuthMissing,
};

inline std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::FileNotFound: return "file-not-found";
    case ErrorCode::UnsupportedFormat: return "unsupported-format";
    case ErrorCode::CorruptData: return "corrupt-data";
    case ErrorCode::InvalidData: return "invalid-data";
    case ErrorCode::NonRectangular: return "non-rectangular";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::ClassifierUnavailable: return "classifier-unavailable";
    case ErrorCode::ProtocolViolation: return "protocol-violation";
    case ErrorCode::StubMiss: return "stub-miss";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::HttpError: return "http-error";
    case ErrorCode::MalformedResponse: return "malformed-response";
    case ErrorCode::AuthMissing: return "auth-missing";
    }
    return "unknown";
}

/// Pipeline stage an error surfaced in. Carried through generate_report and
/// the HTTP service so callers can tell where a failure happened.
enum class Stage { None, Raster, Segmentation, Attributes, Captioner, Reasoning, Config };

inline std::string_view to_string(Stage stage) noexcept
{
    switch (stage) {
    case Stage::None: return "";
    case Stage::Raster: return "raster";
    case Stage::Segmentation: return "segmentation";
    case Stage::Attributes: return "attributes";
    case Stage::Captioner: return "captioner";
    case Stage::Reasoning: return "reasoning";
    case Stage::Config: return "config";
    }
    return "";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, Stage stage = Stage::None, int http_status = 0)
        : std::runtime_error(what), code_(code), stage_(stage), http_status_(http_status)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    Stage stage() const noexcept { return stage_; }
    /// Upstream status for HttpError, 0 otherwise.
    int http_status() const noexcept { return http_status_; }

    Error with_stage(Stage stage) const
    {
        if (stage_ != Stage::None) return *this;
        return Error(code_, what(), stage, http_status_);
    }

private:
    ErrorCode code_;
    Stage stage_;
    int http_status_;
};

} // namespace heatcap
