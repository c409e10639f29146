#pragma once

// Object identity backends: a remote zero-shot classifier over HTTP, a stub
// backed by a sidecar annotation file, and a constant label.

#include "heatcap/attributes.hpp"
#include "heatcap/error.hpp"
#include "heatcap/http_util.hpp"
#include "heatcap/raster.hpp"
#include "heatcap/raster_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace heatcap {

inline const std::vector<std::string>& coco_labels()
{
    static const std::vector<std::string> labels{
        "person",        "bicycle",      "car",           "motorcycle",    "airplane",     "bus",
        "train",         "truck",        "boat",          "traffic light", "fire hydrant", "stop sign",
        "parking meter", "bench",        "bird",          "cat",           "dog",          "horse",
        "sheep",         "cow",          "elephant",      "bear",          "zebra",        "giraffe",
        "backpack",      "umbrella",     "handbag",       "tie",           "suitcase",     "frisbee",
        "skis",          "snowboard",    "sports ball",   "kite",          "baseball bat", "baseball glove",
        "skateboard",    "surfboard",    "tennis racket", "bottle",        "wine glass",   "cup",
        "fork",          "knife",        "spoon",         "bowl",          "banana",       "apple",
        "sandwich",      "orange",       "broccoli",      "carrot",        "hot dog",      "pizza",
        "donut",         "cake",         "chair",         "couch",         "potted plant", "bed",
        "dining table",  "toilet",       "tv",            "laptop",        "mouse",        "remote",
        "keyboard",      "cell phone",   "microwave",     "oven",          "toaster",      "sink",
        "refrigerator",  "book",         "clock",         "vase",          "scissors",     "teddy bear",
        "hair drier",    "toothbrush",
    };
    return labels;
}

enum class ClassifierKind { Remote, Stub, Constant };

struct ClassifierRef {
    ClassifierKind kind = ClassifierKind::Constant;
    std::string endpoint;                           ///< remote only
    std::vector<std::string> label_set = coco_labels();
    std::filesystem::path sidecar;                  ///< stub only
    std::string fixed_label = "object";             ///< constant only
    double timeout_s = 30.0;
};

namespace detail {

inline void require_member(const std::vector<std::string>& labels, const std::string& label)
{
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
        throw Error(ErrorCode::ProtocolViolation, "label '" + label + "' is not in the label set", Stage::Attributes);
}

} // namespace detail

/// Returns its configured label for every crop. The label is user-chosen,
/// so it is not checked against the label set.
class ConstantClassifier final : public Classifier {
public:
    explicit ConstantClassifier(std::string label) : label_(std::move(label))
    {
        if (label_.empty()) throw Error(ErrorCode::InvalidConfig, "constant classifier needs a fixed_label");
    }

    Identity classify(const ImageRGB&, const BBox&, const ObjectKey&) const override { return {label_, 1.0}; }

private:
    std::string label_;
};

/// Sidecar JSON maps object ids to labels. Keys are either "<id>" or
/// "<heatmap label>/<id>"; the qualified form wins. Values are a label
/// string or {"label": .., "score": ..}.
class StubClassifier final : public Classifier {
public:
    StubClassifier(const nlohmann::json& sidecar, std::vector<std::string> label_set) : label_set_(std::move(label_set))
    {
        if (!sidecar.is_object()) throw Error(ErrorCode::InvalidConfig, "stub sidecar must be a JSON object");
        for (const auto& [key, value] : sidecar.items()) {
            Identity id;
            if (value.is_string()) {
                id.label = value.get<std::string>();
            } else if (value.is_object() && value.contains("label")) {
                id.label = value.at("label").get<std::string>();
                id.score = value.value("score", 1.0);
            } else {
                throw Error(ErrorCode::InvalidConfig, "stub sidecar entry '" + key + "' must be a label or object");
            }
            table_.emplace(key, std::move(id));
        }
    }

    static StubClassifier from_file(const std::filesystem::path& path, std::vector<std::string> label_set)
    {
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::FileNotFound, "stub sidecar not found: " + path.string());
        try {
            return StubClassifier(nlohmann::json::parse(in), std::move(label_set));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidConfig, std::string("stub sidecar: ") + e.what());
        }
    }

    Identity classify(const ImageRGB&, const BBox&, const ObjectKey& key) const override
    {
        const auto id = std::to_string(key.object_id);
        auto it = key.heatmap_label.empty() ? table_.end() : table_.find(key.heatmap_label + "/" + id);
        if (it == table_.end()) it = table_.find(id);
        if (it == table_.end())
            throw Error(ErrorCode::StubMiss, "stub sidecar has no entry for object " + id, Stage::Attributes);
        detail::require_member(label_set_, it->second.label);
        return it->second;
    }

private:
    std::map<std::string, Identity> table_;
    std::vector<std::string> label_set_;
};

/// POST {endpoint}/classify with {"image_png_base64", "labels"}; expects
/// {"label", "score"} back with a 2xx status.
class RemoteClassifier final : public Classifier {
public:
    RemoteClassifier(std::string endpoint, std::vector<std::string> label_set, double timeout_s)
        : endpoint_(net::parse_endpoint(endpoint)), label_set_(std::move(label_set)), timeout_s_(timeout_s)
    {
    }

    Identity classify(const ImageRGB& image, const BBox& box, const ObjectKey&) const override
    {
        const auto png = encode_png(crop(image, box));
        const nlohmann::json body{
            {"image_png_base64", net::base64_encode({reinterpret_cast<const char*>(png.data()), png.size()})},
            {"labels", label_set_},
        };

        auto client = net::make_client(endpoint_, timeout_s_);
        auto res = client->Post(endpoint_.path("/classify"), body.dump(), "application/json");
        if (!res)
            throw Error(ErrorCode::ClassifierUnavailable, "classifier unreachable: " + httplib::to_string(res.error()),
                        Stage::Attributes);
        if (res->status < 200 || res->status >= 300)
            throw Error(ErrorCode::ClassifierUnavailable, "classifier returned HTTP " + std::to_string(res->status),
                        Stage::Attributes, res->status);

        Identity id;
        try {
            const auto j = nlohmann::json::parse(res->body);
            id.label = j.at("label").get<std::string>();
            id.score = j.at("score").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ProtocolViolation, std::string("classifier response: ") + e.what(), Stage::Attributes);
        }
        if (!(id.score >= 0.0 && id.score <= 1.0))
            throw Error(ErrorCode::ProtocolViolation, "classifier score outside [0, 1]", Stage::Attributes);
        detail::require_member(label_set_, id.label);
        return id;
    }

private:
    net::Endpoint endpoint_;
    std::vector<std::string> label_set_;
    double timeout_s_;
};

inline std::unique_ptr<Classifier> make_classifier(const ClassifierRef& ref)
{
    if (ref.label_set.empty()) throw Error(ErrorCode::InvalidConfig, "classifier label set is empty");
    switch (ref.kind) {
    case ClassifierKind::Remote:
        if (ref.endpoint.empty()) throw Error(ErrorCode::InvalidConfig, "remote classifier needs an endpoint");
        if (!(ref.timeout_s > 0)) throw Error(ErrorCode::InvalidConfig, "classifier timeout must be positive");
        return std::make_unique<RemoteClassifier>(ref.endpoint, ref.label_set, ref.timeout_s);
    case ClassifierKind::Stub:
        return std::make_unique<StubClassifier>(StubClassifier::from_file(ref.sidecar, ref.label_set));
    case ClassifierKind::Constant:
        return std::make_unique<ConstantClassifier>(ref.fixed_label);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown classifier kind");
}

/// One label per line; blank lines skipped.
inline std::vector<std::string> load_labels(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "labels file not found: " + path.string());
    std::vector<std::string> labels;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) labels.push_back(line);
    }
    if (labels.empty()) throw Error(ErrorCode::InvalidConfig, "labels file is empty: " + path.string());
    return labels;
}

} // namespace heatcap
