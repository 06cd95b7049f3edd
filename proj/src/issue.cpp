#include "causeway/issue.hpp"

#include <fstream>

namespace causeway {

namespace {

std::string str_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return {};
    const auto& v = j.at(key);
    if (!v.is_string()) throw FormatError(0, std::string("field '") + key +
                                                 "' must be a string");
    return v.get<std::string>();
}

nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(0, "cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(e.byte, e.what());
    }
}

}  // namespace

IssueReport report_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError(0, "issue report must be a JSON object");
    IssueReport r;
    r.id = str_field(j, "id");
    if (r.id.empty()) throw FormatError(0, "issue report needs a non-empty id");
    r.system = str_field(j, "system");
    r.version = str_field(j, "version");
    r.title = str_field(j, "title");
    r.description = str_field(j, "description");
    if (j.contains("logs")) {
        if (!j.at("logs").is_array())
            throw FormatError(0, "field 'logs' must be an array of strings");
        for (const auto& line : j.at("logs")) {
            if (!line.is_string())
                throw FormatError(0, "field 'logs' must be an array of strings");
            r.log_lines.push_back(line.get<std::string>());
        }
    }
    r.stack_trace = str_field(j, "stack_trace");
    if (j.contains("meta")) {
        if (!j.at("meta").is_object())
            throw FormatError(0, "field 'meta' must be an object");
        for (const auto& [k, v] : j.at("meta").items()) {
            if (!v.is_string())
                throw FormatError(0, "meta values must be strings");
            r.meta[k] = v.get<std::string>();
        }
    }
    return r;
}

nlohmann::ordered_json report_to_json(const IssueReport& r) {
    nlohmann::ordered_json o;
    o["id"] = r.id;
    o["system"] = r.system;
    o["version"] = r.version;
    o["title"] = r.title;
    o["description"] = r.description;
    o["logs"] = r.log_lines;
    o["stack_trace"] = r.stack_trace;
    o["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.meta) o["meta"][k] = v;
    return o;
}

IssueReport load_issue_report(const std::string& path) {
    return report_from_json(parse_file(path));
}

std::vector<LabeledIssue> load_corpus(const std::string& path) {
    nlohmann::json j = parse_file(path);
    if (!j.is_array()) throw FormatError(0, "corpus must be a JSON array");
    std::vector<LabeledIssue> out;
    for (const auto& row : j) {
        LabeledIssue li;
        li.report = report_from_json(row);
        if (!row.contains("ground_truth") || !row.at("ground_truth").is_object())
            throw FormatError(0, "corpus row '" + li.report.id +
                                     "' lacks a ground_truth object");
        const auto& gt = row.at("ground_truth");
        li.truth.issue_id = li.report.id;
        li.truth.summary = str_field(gt, "summary");
        if (!gt.contains("components") || !gt.at("components").is_array())
            throw FormatError(0, "ground_truth of '" + li.report.id +
                                     "' lacks a components array");
        for (const auto& c : gt.at("components")) {
            if (!c.is_string())
                throw FormatError(0, "components must be strings");
            li.truth.components.push_back(c.get<std::string>());
        }
        if (li.truth.components.empty() || li.truth.components.size() > 2)
            throw FormatError(0, "ground_truth of '" + li.report.id +
                                     "' must name one or two components");
        out.push_back(std::move(li));
    }
    return out;
}

HistoricalExample to_example(const LabeledIssue& li) {
    return {li.report, li.truth.summary, li.truth.components};
}

}  // namespace causeway
