#pragma once

#include "hubeval/call_parser.hpp"
#include "hubeval/common.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hubeval {

using ordered_json = nlohmann::ordered_json;

struct ApiArgument {
    std::string name;
    bool optional = false;

    bool operator==(const ApiArgument&) const = default;
};

struct Metric {
    std::string name;
    double value = 0.0;

    bool operator==(const Metric&) const = default;
};

/// Metrics reported for one dataset. Nested metric maps are flattened with " / ".
struct PerformanceGroup {
    std::string dataset;
    std::vector<Metric> metrics;

    bool operator==(const PerformanceGroup&) const = default;
};

/// One model-card entry: the unit of retrieval and the ground truth of evaluation.
struct ApiRecord {
    std::string id;
    std::string domain;
    std::string framework;
    std::string functionality;
    std::string api_name;
    std::string api_call;
    std::vector<ApiArgument> api_arguments;
    std::string environment_requirements;
    std::string example_code;
    std::vector<PerformanceGroup> performance;
    std::string description;
    /// Unknown keys from the source line, kept for round-tripping.
    ordered_json extra = ordered_json::object();

    bool operator==(const ApiRecord&) const = default;

    std::vector<std::string> argument_names() const;
};

/// Decodes one record. Throws Error on missing keys or wrong types. Fractional
/// metrics in [0, 1] are rescaled to percent; a note is appended to `warnings`.
ApiRecord record_from_json(const ordered_json& j, std::vector<std::string>* warnings = nullptr);

/// Key order: id, the ten documentation fields, then preserved unknown keys.
ordered_json record_to_json(const ApiRecord& record);

/// Compact single-line JSON of record_to_json.
std::string serialize_record(const ApiRecord& record);

/// Empty iff the record is well formed. Each entry starts with the field name.
std::vector<std::string> validate_record(const ApiRecord& record);

class ApiDatabase {
public:
    ApiDatabase() = default;
    /// Throws Error on duplicate ids or records that fail validation.
    ApiDatabase(Hub hub, std::vector<ApiRecord> records, std::vector<std::string> warnings = {});

    Hub hub() const { return hub_; }
    std::span<const ApiRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const ApiRecord& at(std::string_view id) const;
    const ApiRecord* find(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;
    bool contains(std::string_view id) const { return index_of(id).has_value(); }

    /// Parsed api_call of the record at `index`.
    const CallNode& call_of(std::size_t index) const { return calls_[index]; }

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    Hub hub_ = Hub::TorchHub;
    std::vector<ApiRecord> records_;
    std::vector<CallNode> calls_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<std::string> warnings_;
};

/// JSON Lines, one record per line. Blank lines and `{"_header": ...}` lines are skipped.
ApiDatabase load_database(const std::filesystem::path& path, Hub hub);
ApiDatabase parse_database(std::istream& in, Hub hub);
void write_database(std::ostream& out, const ApiDatabase& db);

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
    std::uint64_t seed = 0;
};

/// Test share in percent: 10 for HuggingFace, 20 for the other hubs.
int test_percent(Hub hub);

/// Shuffles with seeded_shuffle(seed) and takes the first round(pct * n / 100) ids
/// (at least one when n >= 2) as the test set. Both halves keep input order.
DatasetSplit split_dataset(std::span<const std::string> ids, Hub hub, std::uint64_t seed);

}  // namespace hubeval
