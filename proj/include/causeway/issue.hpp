#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "causeway/errors.hpp"

namespace causeway {

/// A user-filed ticket describing a failure.
struct IssueReport {
    std::string id;
    std::string system;
    std::string version;
    std::string title;
    std::string description;
    std::vector<std::string> log_lines;
    std::string stack_trace;
    std::map<std::string, std::string> meta;

    bool operator==(const IssueReport&) const = default;
};

/// Labeled answer for one issue: prose root cause + responsible components.
struct GroundTruth {
    std::string issue_id;
    std::string summary;
    std::vector<std::string> components;  // set semantics; size 1 or 2

    bool operator==(const GroundTruth&) const = default;
};

/// A historical issue used as an in-context example.
struct HistoricalExample {
    IssueReport report;
    std::string root_cause_summary;
    std::vector<std::string> components;

    bool operator==(const HistoricalExample&) const = default;
};

/// One corpus row: the report plus its label.
struct LabeledIssue {
    IssueReport report;
    GroundTruth truth;

    bool operator==(const LabeledIssue&) const = default;
};

/// JSON shape: {id, system, version, title, description, logs: [..],
/// stack_trace, ground_truth: {summary, components: [..]}, meta: {..}}.
/// ground_truth is optional for plain issue-report files.
IssueReport report_from_json(const nlohmann::json& j);
nlohmann::ordered_json report_to_json(const IssueReport& r);

/// Loads a single issue-report file (ground_truth, if present, is ignored).
IssueReport load_issue_report(const std::string& path);

/// Loads a labeled corpus (JSON array). Throws FormatError when a row lacks
/// ground_truth or its components are not 1..2 entries.
std::vector<LabeledIssue> load_corpus(const std::string& path);

/// View of a labeled issue as an in-context example.
HistoricalExample to_example(const LabeledIssue& li);

}  // namespace causeway
