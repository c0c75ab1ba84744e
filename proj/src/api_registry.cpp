#include "hubeval/api_registry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hubeval {

namespace {

constexpr std::string_view kEnvAlias = "python_environment_requirements";

const std::vector<std::string_view>& field_names() {
    static const std::vector<std::string_view> kFields = {
        "domain",        "framework",   "functionality", "api_name",
        "api_call",      "api_arguments", "environment_requirements",
        "example_code",  "performance", "description",
    };
    return kFields;
}

std::string text_field(const ordered_json& j, std::string_view key) {
    const auto& v = j.at(std::string(key));
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return {};
    return v.dump();
}

std::vector<ApiArgument> parse_arguments(const ordered_json& v) {
    std::vector<ApiArgument> out;
    if (v.is_null()) return out;
    if (v.is_string()) {
        std::stringstream ss(v.get<std::string>());
        std::string part;
        while (std::getline(ss, part, ',')) {
            part = trim(part);
            if (!part.empty()) out.push_back(ApiArgument{part, false});
        }
        return out;
    }
    if (v.is_object()) {
        for (const auto& [name, _] : v.items()) out.push_back(ApiArgument{name, false});
        return out;
    }
    if (!v.is_array()) throw Error("api_arguments: expected a list, object or string");
    for (const auto& item : v) {
        if (item.is_string()) {
            out.push_back(ApiArgument{item.get<std::string>(), false});
        } else if (item.is_object() && item.contains("name") && item["name"].is_string()) {
            const bool optional = item.contains("optional") && item["optional"].is_boolean() &&
                                  item["optional"].get<bool>();
            out.push_back(ApiArgument{item["name"].get<std::string>(), optional});
        } else {
            throw Error("api_arguments: entries must be strings or {name, optional} objects");
        }
    }
    return out;
}

double metric_value(const ordered_json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = trim(v.get<std::string>());
        if (!s.empty() && s.back() == '%') s = trim(s.substr(0, s.size() - 1));
        double out = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (!s.empty() && res.ec == std::errc{} && res.ptr == s.data() + s.size()) return out;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void flatten_metrics(const ordered_json& v, const std::string& prefix, std::vector<Metric>& out) {
    if (v.is_object()) {
        for (const auto& [key, child] : v.items()) {
            flatten_metrics(child, prefix.empty() ? key : prefix + " / " + key, out);
        }
        return;
    }
    out.push_back(Metric{prefix, metric_value(v)});
}

PerformanceGroup group_from_object(const ordered_json& obj, std::string_view dataset_key) {
    PerformanceGroup g;
    for (const auto& [key, child] : obj.items()) {
        if (key == dataset_key && child.is_string()) {
            g.dataset = child.get<std::string>();
        } else if (key == "metrics") {
            flatten_metrics(child, "", g.metrics);
        } else {
            flatten_metrics(child, key, g.metrics);
        }
    }
    return g;
}

std::vector<PerformanceGroup> parse_performance(const ordered_json& v) {
    std::vector<PerformanceGroup> out;
    if (v.is_null()) return out;
    if (v.is_array()) {
        for (const auto& item : v) {
            if (!item.is_object()) throw Error("performance: list entries must be objects");
            out.push_back(group_from_object(item, "dataset"));
        }
        return out;
    }
    if (!v.is_object()) {
        // Free text with no structure carries no metrics.
        if (v.is_string()) return out;
        throw Error("performance: expected a list or object");
    }
    if (v.empty()) return out;
    if (v.contains("dataset") && v["dataset"].is_array()) {
        // {"dataset": [{"name": ..., <metric tree>}, ...]}
        for (const auto& item : v["dataset"]) {
            if (!item.is_object()) throw Error("performance: dataset entries must be objects");
            out.push_back(group_from_object(item, "name"));
        }
        return out;
    }
    out.push_back(group_from_object(v, "dataset"));
    return out;
}

void rescale_fractions(ApiRecord& r, std::vector<std::string>* warnings) {
    for (auto& g : r.performance) {
        for (auto& m : g.metrics) {
            if (!std::isfinite(m.value) || m.value <= 0.0 || m.value > 1.0) continue;
            if (icontains(m.name, "param")) continue;
            const double scaled = std::round(m.value * 100.0 * 1e10) / 1e10;
            if (warnings != nullptr) {
                std::ostringstream msg;
                msg << "record '" << r.id << "': metric '" << m.name << "' on '" << g.dataset
                    << "' looked fractional (" << m.value << "); rescaled to " << scaled;
                warnings->push_back(msg.str());
            }
            m.value = scaled;
        }
    }
}

bool is_header_line(const ordered_json& j) {
    return j.is_object() && j.size() == 1 && j.contains("_header");
}

}  // namespace

std::vector<std::string> ApiRecord::argument_names() const {
    std::vector<std::string> out;
    out.reserve(api_arguments.size());
    for (const auto& a : api_arguments) out.push_back(a.name);
    return out;
}

ApiRecord record_from_json(const ordered_json& j, std::vector<std::string>* warnings) {
    if (!j.is_object()) throw Error("record must be a JSON object");
    if (!j.contains("id")) throw Error("missing key 'id'");
    for (auto key : field_names()) {
        if (!j.contains(std::string(key)) &&
            !(key == "environment_requirements" && j.contains(std::string(kEnvAlias)))) {
            throw Error("missing key '" + std::string(key) + "'");
        }
    }
    ApiRecord r;
    const auto& id = j["id"];
    if (id.is_string()) r.id = id.get<std::string>();
    else if (id.is_number_integer()) r.id = id.dump();
    else throw Error("id: expected a string");

    r.domain = text_field(j, "domain");
    r.framework = text_field(j, "framework");
    r.functionality = text_field(j, "functionality");
    r.api_name = text_field(j, "api_name");
    r.api_call = text_field(j, "api_call");
    r.api_arguments = parse_arguments(j["api_arguments"]);
    r.environment_requirements = j.contains("environment_requirements")
                                     ? text_field(j, "environment_requirements")
                                     : text_field(j, kEnvAlias);
    r.example_code = text_field(j, "example_code");
    r.performance = parse_performance(j["performance"]);
    r.description = text_field(j, "description");

    for (const auto& [key, value] : j.items()) {
        if (key == "id" || key == kEnvAlias) continue;
        bool known = false;
        for (auto f : field_names()) known = known || key == f;
        if (!known) r.extra[key] = value;
    }
    rescale_fractions(r, warnings);
    return r;
}

ordered_json record_to_json(const ApiRecord& r) {
    ordered_json j = ordered_json::object();
    j["id"] = r.id;
    j["domain"] = r.domain;
    j["framework"] = r.framework;
    j["functionality"] = r.functionality;
    j["api_name"] = r.api_name;
    j["api_call"] = r.api_call;
    ordered_json args = ordered_json::array();
    for (const auto& a : r.api_arguments) {
        ordered_json arg = ordered_json::object();
        arg["name"] = a.name;
        arg["optional"] = a.optional;
        args.push_back(std::move(arg));
    }
    j["api_arguments"] = std::move(args);
    j["environment_requirements"] = r.environment_requirements;
    j["example_code"] = r.example_code;
    ordered_json perf = ordered_json::array();
    for (const auto& g : r.performance) {
        ordered_json group = ordered_json::object();
        group["dataset"] = g.dataset;
        ordered_json metrics = ordered_json::object();
        for (const auto& m : g.metrics) metrics[m.name] = m.value;
        group["metrics"] = std::move(metrics);
        perf.push_back(std::move(group));
    }
    j["performance"] = std::move(perf);
    j["description"] = r.description;
    for (const auto& [key, value] : r.extra.items()) j[key] = value;
    return j;
}

std::string serialize_record(const ApiRecord& record) { return record_to_json(record).dump(); }

std::vector<std::string> validate_record(const ApiRecord& r) {
    std::vector<std::string> out;
    if (r.id.empty()) out.emplace_back("id: must not be empty");
    if (trim(r.api_call).empty()) {
        out.emplace_back("api_call: must not be empty");
    } else {
        const auto calls = parse_calls(r.api_call);
        if (calls.size() != 1) {
            out.push_back("api_call: expected exactly one call expression, found " +
                          std::to_string(calls.size()));
        }
    }
    for (const auto& a : r.api_arguments) {
        if (trim(a.name).empty()) {
            out.emplace_back("api_arguments: argument names must not be empty");
            break;
        }
    }
    for (const auto& g : r.performance) {
        for (const auto& m : g.metrics) {
            if (!std::isfinite(m.value)) {
                out.push_back("performance: metric '" + m.name + "' for dataset '" + g.dataset +
                              "' is not a finite number");
            }
        }
    }
    return out;
}

ApiDatabase::ApiDatabase(Hub hub, std::vector<ApiRecord> records, std::vector<std::string> warnings)
    : hub_(hub), records_(std::move(records)), warnings_(std::move(warnings)) {
    calls_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        const auto violations = validate_record(r);
        if (!violations.empty()) throw Error("record '" + r.id + "': " + violations.front());
        const auto [it, inserted] = by_id_.emplace(r.id, i);
        if (!inserted) {
            throw Error("duplicate id '" + r.id + "' (records " + std::to_string(it->second + 1) +
                        " and " + std::to_string(i + 1) + ")");
        }
        calls_.push_back(parse_calls(r.api_call).front());
    }
}

std::optional<std::size_t> ApiDatabase::index_of(std::string_view id) const {
    const auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

const ApiRecord* ApiDatabase::find(std::string_view id) const {
    const auto idx = index_of(id);
    return idx ? &records_[*idx] : nullptr;
}

const ApiRecord& ApiDatabase::at(std::string_view id) const {
    const ApiRecord* r = find(id);
    if (r == nullptr) throw Error("unknown api id '" + std::string(id) + "'");
    return *r;
}

ApiDatabase parse_database(std::istream& in, Hub hub) {
    std::vector<ApiRecord> records;
    std::vector<std::string> warnings;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        if (is_header_line(j)) continue;
        ApiRecord r;
        try {
            r = record_from_json(j, &warnings);
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
        const auto [it, inserted] = first_line.emplace(r.id, line_no);
        if (!inserted) {
            throw Error("duplicate id '" + r.id + "' on lines " + std::to_string(it->second) +
                        " and " + std::to_string(line_no));
        }
        const auto violations = validate_record(r);
        if (!violations.empty()) {
            throw Error("record '" + r.id + "' (line " + std::to_string(line_no) +
                        "): " + violations.front());
        }
        records.push_back(std::move(r));
    }
    return ApiDatabase(hub, std::move(records), std::move(warnings));
}

ApiDatabase load_database(const std::filesystem::path& path, Hub hub) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open database '" + path.string() + "'");
    try {
        return parse_database(in, hub);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void write_database(std::ostream& out, const ApiDatabase& db) {
    for (const auto& r : db.records()) out << serialize_record(r) << '\n';
}

int test_percent(Hub hub) { return hub == Hub::HuggingFace ? 10 : 20; }

DatasetSplit split_dataset(std::span<const std::string> ids, Hub hub, std::uint64_t seed) {
    if (ids.empty()) throw Error("cannot split an empty id list");
    const std::size_t n = ids.size();
    std::size_t test_n = (n * static_cast<std::size_t>(test_percent(hub)) + 50) / 100;
    if (n >= 2 && test_n == 0) test_n = 1;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    seeded_shuffle(std::span<std::size_t>(order), seed);

    std::vector<bool> in_test(n, false);
    for (std::size_t i = 0; i < test_n; ++i) in_test[order[i]] = true;

    DatasetSplit split;
    split.seed = seed;
    for (std::size_t i = 0; i < n; ++i) (in_test[i] ? split.test : split.train).push_back(ids[i]);
    return split;
}

}  // namespace hubeval
