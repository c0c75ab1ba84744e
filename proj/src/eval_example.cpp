#include "hubeval/eval_example.hpp"

#include <json.hpp>

#include <sstream>

namespace hubeval {

std::vector<EvalExample> parse_examples(std::string_view jsonl) {
    std::vector<EvalExample> out;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("_header")) continue;
            EvalExample ex;
            ex.id = j.at("id").get<std::string>();
            ex.instruction = j.at("instruction").get<std::string>();
            ex.reference_id = j.at("reference_id").get<std::string>();
            ex.hub = parse_hub(j.at("hub").get<std::string>());
            out.push_back(std::move(ex));
        } catch (const nlohmann::json::exception& e) {
            throw Error("examples line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("examples line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<EvalExample> load_examples(const std::filesystem::path& path) {
    return parse_examples(read_file(path));
}

std::string examples_to_jsonl(const std::vector<EvalExample>& examples) {
    std::string out;
    for (const auto& ex : examples) {
        nlohmann::ordered_json j;
        j["id"] = ex.id;
        j["instruction"] = ex.instruction;
        j["reference_id"] = ex.reference_id;
        j["hub"] = std::string(to_string(ex.hub));
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<std::string> load_id_list(const std::filesystem::path& path) {
    std::vector<std::string> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '{') {
            const auto j = nlohmann::json::parse(t);
            if (j.contains("_header")) continue;
            out.push_back(j.at("id").get<std::string>());
        } else {
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace hubeval
