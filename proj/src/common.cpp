#include "hubeval/common.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace hubeval {

namespace {

constexpr std::array<std::string_view, 6> kTorchHubDomains = {
    "Classification",       "Semantic Segmentation", "Object Detection",
    "Audio Separation",     "Video Classification",  "Text-to-Speech",
};

constexpr std::array<std::string_view, 47> kTensorHubDomains = {
    "text-sequence-alignment", "text-embedding", "text-language-model", "text-preprocessing",
    "text-classification", "text-generation", "text-question-answering",
    "text-retrieval-question-answering", "text-segmentation", "text-to-mel",
    "image-classification", "image-feature-vector", "image-object-detection",
    "image-segmentation", "image-generator", "image-pose-detection", "image-rnn-agent",
    "image-augmentation", "image-classifier", "image-style-transfer", "image-aesthetic-quality",
    "image-depth-estimation", "image-super-resolution", "image-deblurring",
    "image-extrapolation", "image-text-recognition", "image-dehazing", "image-deraining",
    "image-enhancemenmt", "image-classification-logits", "image-frame-interpolation",
    "image-text-detection", "image-denoising", "image-others", "video-classification",
    "video-feature-extraction", "video-generation", "video-audio-text", "video-text",
    "audio-embedding", "audio-event-classification", "audio-command-detection",
    "audio-paralinguists-classification", "audio-speech-to-text", "audio-speech-synthesis",
    "audio-synthesis", "audio-pitch-extraction",
};

constexpr std::array<std::string_view, 36> kHuggingFaceDomains = {
    "Multimodal Feature Extraction", "Multimodal Text-to-Image", "Multimodal Image-to-Text",
    "Multimodal Text-to-Video", "Multimodal Visual Question Answering",
    "Multimodal Document Question Answer", "Multimodal Graph Machine Learning",
    "Computer Vision Depth Estimation", "Computer Vision Image Classification",
    "Computer Vision Object Detection", "Computer Vision Image Segmentation",
    "Computer Vision Image-to-Image", "Computer Vision Unconditional Image Generation",
    "Computer Vision Video Classification", "Computer Vision Zero-Shor Image Classification",
    "Natural Language Processing Text Classification",
    "Natural Language Processing Token Classification",
    "Natural Language Processing Table Question Answering",
    "Natural Language Processing Question Answering",
    "Natural Language Processing Zero-Shot Classification",
    "Natural Language Processing Translation", "Natural Language Processing Summarization",
    "Natural Language Processing Conversational", "Natural Language Processing Text Generation",
    "Natural Language Processing Fill-Mask", "Natural Language Processing Text2Text Generation",
    "Natural Language Processing Sentence Similarity", "Audio Text-to-Speech",
    "Audio Automatic Speech Recognition", "Audio Audio-to-Audio", "Audio Audio Classification",
    "Audio Voice Activity Detection", "Tabular Tabular Classification",
    "Tabular Tabular Regression", "Reinforcement Learning Reinforcement Learning",
    "Reinforcement Learning Robotics",
};

}  // namespace

std::string_view to_string(Hub hub) {
    switch (hub) {
    case Hub::TorchHub: return "torchhub";
    case Hub::TensorHub: return "tensorhub";
    case Hub::HuggingFace: return "huggingface";
    }
    return "unknown";
}

Hub parse_hub(std::string_view text) {
    std::string key;
    for (char c : text) {
        if (c == '_' || c == '-' || c == ' ') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "torchhub") return Hub::TorchHub;
    if (key == "tensorhub" || key == "tensorflowhub" || key == "tfhub") return Hub::TensorHub;
    if (key == "huggingface" || key == "hf") return Hub::HuggingFace;
    throw Error("unknown hub '" + std::string(text) + "' (expected torchhub|tensorhub|huggingface)");
}

std::span<const std::string_view> hub_domains(Hub hub) {
    switch (hub) {
    case Hub::TorchHub: return kTorchHubDomains;
    case Hub::TensorHub: return kTensorHubDomains;
    case Hub::HuggingFace: return kHuggingFaceDomains;
    }
    return {};
}

std::string trim(std::string_view text) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return std::string(text.substr(b, e - b));
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && to_lower(a) == to_lower(b);
}

bool icontains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Largest multiple of bound that fits; draws above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound);
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    return draw % bound;
}

}  // namespace hubeval
