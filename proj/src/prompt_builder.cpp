#include "hubeval/prompt_builder.hpp"

#include "selfinstruct_template.hpp"

namespace hubeval {

namespace {

void replace_all(std::string& text, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string_view marker_sentence() {
    return kRetrievalMarker.substr(0, kRetrievalMarker.size() - 1);
}

}  // namespace

std::string build_prompt(std::string_view user_prompt, const PromptMode& mode) {
    if (trim(user_prompt).empty()) throw Error("user prompt must not be empty");
    if (user_prompt.find(marker_sentence()) != std::string_view::npos) {
        throw Error("user prompt must not contain the retrieval marker sentence");
    }
    if (std::holds_alternative<ZeroShot>(mode)) return std::string(user_prompt);
    const auto& doc = std::get<WithRetrieval>(mode).document;
    std::string out(user_prompt);
    out.push_back(' ');
    out += kRetrievalMarker;
    out += serialize_record(doc);
    return out;
}

std::optional<ApiRecord> extract_retrieved_document(std::string_view prompt) {
    const auto pos = prompt.find(kRetrievalMarker);
    if (pos == std::string_view::npos) return std::nullopt;
    const auto json_text = prompt.substr(pos + kRetrievalMarker.size());
    try {
        return record_from_json(ordered_json::parse(json_text));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::string_view default_selfinstruct_template() { return detail::kSelfInstructTemplate; }

std::string build_selfinstruct_prompt(const ApiRecord& record,
                                      std::span<const IncontextExample> incontext,
                                      std::size_t count, std::string_view prompt_template) {
    if (incontext.size() != 3) {
        throw Error("self-instruct prompt needs exactly 3 in-context examples, got " +
                    std::to_string(incontext.size()));
    }
    if (count == 0) throw Error("instruction count must be at least 1");
    std::string examples;
    for (std::size_t i = 0; i < incontext.size(); ++i) {
        if (i) examples += "\n\n";
        examples += "Example " + std::to_string(i + 1) + "\n";
        examples += "Instruction: " + incontext[i].instruction + "\n";
        examples += "API call: " + incontext[i].api_call;
    }
    std::string out(prompt_template);
    replace_all(out, "{{examples}}", examples);
    replace_all(out, "{{count}}", std::to_string(count));
    // Last, so text inside the document is never treated as a placeholder.
    replace_all(out, "{{api_doc}}", serialize_record(record));
    return out;
}

}  // namespace hubeval
