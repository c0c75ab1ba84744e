#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/eval_example.hpp"

#include "../oracles/classify_oracle.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace testing_support {

inline std::filesystem::path data_dir() { return HUBEVAL_DATA_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return data_dir() / "fixtures" / name; }

inline hubeval::ApiDatabase fixture_db(hubeval::Hub hub) {
    return hubeval::load_database(fixture(std::string(hubeval::to_string(hub)) + ".jsonl"), hub);
}

inline std::vector<hubeval::EvalExample> fixture_examples(hubeval::Hub hub) {
    return hubeval::load_examples(fixture(std::string(hubeval::to_string(hub)) + "_examples.jsonl"));
}

inline hubeval::ApiRecord make_record(std::string id, std::string api_call,
                                      std::vector<std::string> args = {}) {
    hubeval::ApiRecord r;
    r.id = std::move(id);
    r.domain = "Classification";
    r.framework = "PyTorch";
    r.functionality = "Image Classification";
    r.api_name = r.id;
    r.api_call = std::move(api_call);
    for (auto& a : args) r.api_arguments.push_back({std::move(a), false});
    r.environment_requirements = "torch";
    r.example_code = "";
    r.description = "";
    return r;
}

// Library database for a tuple database from the oracle generator.
inline hubeval::ApiDatabase tuple_db(const std::vector<oracle::CallTuple>& db, bool huggingface) {
    std::vector<hubeval::ApiRecord> records;
    for (std::size_t i = 0; i < db.size(); ++i) {
        records.push_back(make_record("rec-" + std::to_string(i), db[i].render()));
    }
    return hubeval::ApiDatabase(huggingface ? hubeval::Hub::HuggingFace : hubeval::Hub::TorchHub,
                                std::move(records));
}

// A fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hubeval_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testing_support
