#pragma once

#include "hubeval/api_registry.hpp"

#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace hubeval {

/// Sentence that introduces the retrieved document, including its trailing space.
inline constexpr std::string_view kRetrievalMarker = "Use this API documentation for reference: ";

struct ZeroShot {};
struct WithRetrieval {
    ApiRecord document;
};

using PromptMode = std::variant<ZeroShot, WithRetrieval>;

/// ZeroShot: the prompt unchanged. WithRetrieval: prompt + ' ' + marker + the
/// record's compact JSON. Throws Error on an empty prompt.
std::string build_prompt(std::string_view user_prompt, const PromptMode& mode);

/// The record embedded after the marker, or nullopt when the prompt has none.
std::optional<ApiRecord> extract_retrieved_document(std::string_view prompt);

struct IncontextExample {
    std::string instruction;
    std::string api_call;

    bool operator==(const IncontextExample&) const = default;
};

/// The self-instruct template shipped with the library.
std::string_view default_selfinstruct_template();

/// Fills a template containing {{examples}}, {{api_doc}} and {{count}}. Exactly
/// three in-context examples are required.
std::string build_selfinstruct_prompt(const ApiRecord& record,
                                      std::span<const IncontextExample> incontext,
                                      std::size_t count = 10,
                                      std::string_view prompt_template = default_selfinstruct_template());

}  // namespace hubeval
