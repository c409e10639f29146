#pragma once

// Reference captions and prompts from the published examples, with the
// attribute sets that should render them. Prompts are stored as printed and
// canonicalized by canonical_prompt().

#include "heatcap/attributes.hpp"
#include "heatcap/captioner.hpp"
#include "heatcap/reasoning.hpp"

#include <string>
#include <vector>

namespace golden {

using heatcap::ColorShare;
using heatcap::ObjectAttributes;
using heatcap::PositionName;

struct Case {
    std::string name;
    std::vector<ObjectAttributes> objects;
    std::string text;
};

inline ObjectAttributes object(std::size_t id, PositionName pos, double area, std::string label,
                               std::vector<PositionName> salient, std::vector<std::string> colors)
{
    ObjectAttributes a;
    a.object_id = id;
    a.position = pos;
    a.area_fraction = area;
    a.identity = {std::move(label), 1.0};
    a.salient_regions = std::move(salient);
    // Shares only need to be descending; the text carries names alone.
    double pct = 0.5;
    for (auto& c : colors) {
        a.dominant_colors.push_back(ColorShare{std::move(c), pct});
        pct /= 2;
    }
    return a;
}

inline const std::vector<Case>& cases()
{
    using P = PositionName;
    static const std::vector<Case> all{
        {"catdog-heatmap1",
         {object(1, P::TopCenter, 0.1333, "dog", {P::Center, P::CenterRight, P::TopCenter},
                 {"pale orange", "orange", "pale bright orange"})},
         "In this image, one object is detected under the heatmap. Object 1 is located on the top-center side of "
         "the image. It occupies 13.33% of the image. It is a dog. Its center, center-right and top-center parts "
         "are mostly considered important by the model. The main colours of it and its background are pale "
         "orange, orange, and pale bright orange."},
        {"catdog-heatmap2",
         {object(1, P::BottomCenter, 0.2379, "cat", {P::BottomLeft, P::CenterLeft, P::CenterRight},
                 {"pale orange", "orange", "pale yellow"})},
         "In this image, one object is detected under the heatmap. Object 1 is located on the bottom-center side "
         "of the image. It occupies 23.79% of the image. It is a cat. Its bottom-left, center-left and "
         "center-right parts are mostly considered important by the model. The main colours of it and its "
         "background are pale orange, orange, and pale yellow."},
        {"gokart",
         {object(1, P::Center, 0.6844, "go-kart with a human driver", {P::TopCenter, P::BottomCenter, P::Center},
                 {"pale yellow", "pale orange", "black"})},
         "In this image, one object is detected under the heatmap. Object 1 is located on the center side of the "
         "image. It occupies 68.44% of the image. It is a go-kart with a human driver. Its top-center, "
         "bottom-center and center parts are mostly considered important by the model. The main colours of it "
         "and its background are pale yellow, pale orange, and black."},
        {"birds",
         {object(1, P::CenterLeft, 0.1228, "bird", {P::Center, P::CenterRight, P::TopCenter},
                 {"blue", "pale yellow", "grey"}),
          object(2, P::CenterRight, 0.0893, "bird", {P::Center, P::CenterRight, P::TopCenter},
                 {"blue", "pale yellow", "white"})},
         "In this image, two objects are detected under the heatmap. Object 1 is located on the center-left side "
         "of the image. It occupies 12.28% of the image. It is a bird. Its center, center-right and top-center "
         "parts are mostly considered important by the model. The main colours of it and its background are "
         "blue, pale yellow, and grey. Object 2 is located on the center-right side of the image. It occupies "
         "8.93% of the image. It is a bird. Its center, center-right and top-center parts are mostly considered "
         "important by the model. The main colours of it and its background are blue, pale yellow, and white."},
    };
    return all;
}

struct PromptCase {
    std::string name;
    heatcap::PromptSpec spec;
    std::string printed;  ///< prompt as published
    bool exact_form;      ///< printed text uses the builder's lead-ins
};

inline std::string replace_all(std::string s, const std::string& from, const std::string& to)
{
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
    return s;
}

/// Undoes the typesetting slips in the printed prompts: the one
/// "bottom-middle", a doubled space after a label and a missing space
/// between sentences.
inline std::string canonical_prompt(std::string s)
{
    s = replace_all(std::move(s), "bottom-middle", "bottom-center");
    s = replace_all(std::move(s), "Heatmap2:  ", "Heatmap2: ");
    s = replace_all(std::move(s), "model.The", "model. The");
    return s;
}

inline const std::vector<PromptCase>& prompt_cases()
{
    static const std::vector<PromptCase> all = [] {
        const auto& c = cases();
        const std::string catdog_provenance =
            "A neural network is used for extracting two heatmaps for an image, with Heatmap1 being a generated form "
            "the \"tiger cat\" neuron and showing the activation on a cat object in the given image, and Heatmap 2 "
            "being generated from the \"bull mastif\" neuron and showing the activation on a dog object in the given "
            "object.";
        const std::string catdog_question =
            "Can this neural network accurately classify the image as either a cat or dog,  and what is the basis "
            "for this conclusion?";
        const std::string gokart_provenance =
            "A neural network classified an image as \"go-kart\", and a heatmp is generated through visualising its "
            "most activated neuron.";
        const std::string gokart_question =
            "What is the possible shortcoming of this neural network. hint: the human driver and the go-cart objects "
            "have the same degree of saliency.";
        const std::string birds_provenance = "A neural network is used for extracting a heatmap for an image.";
        const std::string birds_question = "Based on the heatmap information, is this network useful for locating a bird object?";

        return std::vector<PromptCase>{
            {"catdog",
             {catdog_provenance, {{"Heatmap1", c[0].text}, {"Heatmap2", c[1].text}}, catdog_question},
             catdog_provenance +
                 " Here are detailed information about heatmaps: Heatmap1: In this image, one object is detected "
                 "under the heatmap. Object 1 is located on the top-center side of the image. It occupies 13.33% of "
                 "the image. It is a dog. Its center, center-right and top-center parts are mostly considered "
                 "important by the model. The main colours of it and its background are pale orange, orange, and "
                 "pale bright orange. Heatmap2:  In this image, one object is detected under the heatmap. Object 1 "
                 "is located on the bottom-middle side of the image. It occupies 23.79% of the image. It is a cat. "
                 "Its bottom-left, center-left and center-right parts are mostly considered important by the "
                 "model.The main colours of it and its background are pale orange, orange, and pale yellow. " +
                 catdog_question,
             true},
            {"gokart",
             {gokart_provenance, {{"Heatmap1", c[2].text}}, gokart_question},
             gokart_provenance +
                 " Here is the description of this heatmap: \"In this image, one object is detected under the "
                 "heatmap. Object 1 is located on the center side of the image. It occupies 68.44% of the image. It "
                 "is a go-kart with a human driver. Its top-center, bottom-center and center parts are mostly "
                 "considered important by the model. The main colours of it and its background are pale yellow, "
                 "pale orange, and black.\" " +
                 gokart_question,
             true},
            {"birds",
             {birds_provenance, {{"Heatmap1", c[3].text}}, birds_question},
             birds_provenance + "  Detailed information of the heatmap: " + c[3].text + " " + birds_question,
             false},
        };
    }();
    return all;
}

/// Every needle occurs in haystack, each after the end of the previous.
inline bool ordered_contains(const std::string& haystack, const std::vector<std::string>& needles)
{
    std::size_t pos = 0;
    for (const auto& n : needles) {
        const auto at = haystack.find(n, pos);
        if (at == std::string::npos) return false;
        pos = at + n.size();
    }
    return true;
}

} // namespace golden
