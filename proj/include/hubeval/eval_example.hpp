#pragma once

#include "hubeval/common.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hubeval {

/// One instruction paired with the id of the API that answers it.
struct EvalExample {
    std::string id;
    std::string instruction;
    std::string reference_id;
    Hub hub = Hub::TorchHub;

    bool operator==(const EvalExample&) const = default;
};

/// JSON Lines of {id, instruction, reference_id, hub}.
std::vector<EvalExample> load_examples(const std::filesystem::path& path);
std::vector<EvalExample> parse_examples(std::string_view jsonl);
std::string examples_to_jsonl(const std::vector<EvalExample>& examples);

/// One id per line; blank lines and lines starting with '#' are skipped. A line
/// holding a JSON object contributes its "id" field.
std::vector<std::string> load_id_list(const std::filesystem::path& path);

}  // namespace hubeval
