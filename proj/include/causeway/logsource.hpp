#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "causeway/cfir.hpp"
#include "causeway/issue.hpp"

namespace causeway {

/// One token of a primitive template. A whitespace-delimited word that mixes
/// static text with a placeholder (e.g. "(timeout=<*>)" or "<*>.") is a
/// Wildcard token whose `text` keeps the decorated rendering; matching treats
/// every Wildcard identically, and decorations add nothing to the static
/// character count.
struct Token {
    enum class Kind { Static, Wildcard };
    Kind kind = Kind::Static;
    std::string text;  // Static: the word; Wildcard: rendering, "<*>" when bare

    static Token word(std::string w) { return {Kind::Static, std::move(w)}; }
    static Token wildcard(std::string rendering = "<*>") {
        return {Kind::Wildcard, std::move(rendering)};
    }
    bool operator==(const Token&) const = default;
};

/// One step of a branch path: which arm of an if statement was taken.
/// if_id is "methodSignature#preorderIndex" of the if statement.
struct BranchStep {
    std::string if_id;
    bool taken = false;
    bool operator==(const BranchStep&) const = default;
};

/// A restored primitive template.
struct LogTemplate {
    std::vector<Token> tokens;  // non-empty; no two adjacent Wildcards
    std::string origin_signature;
    int origin_line = 0;
    std::vector<BranchStep> branch_path;  // program order
    int static_char_count = 0;            // sum of Static token lengths
    bool degraded = false;  // restoration hit a bound; tokens is a bare "<*>"

    /// Tokens joined by single spaces, wildcards as their decorated text.
    std::string rendered() const;
    bool operator==(const LogTemplate&) const = default;
};

/// Restoration bound: beyond either limit a statement degrades to a single
/// all-wildcard template instead of failing the pipeline.
struct RestorationLimits {
    int max_assign_hops = 8;
    int max_templates_per_statement = 64;  // 2^6 branch combinations
};

/// Degradation notice for one logging statement.
struct RestorationDiagnostic {
    std::string method_signature;
    int line = 0;
    std::string reason;
    bool operator==(const RestorationDiagnostic&) const = default;
};

struct RestorationResult {
    std::vector<LogTemplate> templates;
    std::vector<RestorationDiagnostic> diagnostics;
};

/// Enumerates primitive templates for every logging statement in `facts` by
/// backward data flow over assignments, branching at each if statement whose
/// arms assign the traced variable.
RestorationResult restore_templates(const CodeFacts& facts,
                                    const RestorationLimits& limits = {});

/// Prefix tree over template token sequences. At most one wildcard child per
/// node; duplicate token sequences share a terminal carrying all origins.
struct TemplateTree {
    struct Node {
        std::map<std::string, std::unique_ptr<Node>> static_children;
        std::unique_ptr<Node> wildcard_child;
        std::vector<size_t> terminals;  // indices into templates
    };
    std::vector<LogTemplate> templates;
    std::unique_ptr<Node> root;
};

TemplateTree build_tree(std::vector<LogTemplate> templates);

/// Log-line grammar: `TIMESTAMP LEVEL [logger:] payload`. Lines that do not
/// open with a recognized timestamp + level are whole-line payloads.
struct LogLineGrammar {
    std::vector<std::string> timestamp_patterns = {
        R"(\d{4}-\d{2}-\d{2}[ T]\d{2}:\d{2}:\d{2}(?:[.,]\d{1,6})?)",
        R"(\d{2}/\d{2}/\d{2} \d{2}:\d{2}:\d{2})",
    };
};

/// A runtime log line split into fields and payload tokens.
struct LogMessage {
    std::string raw;
    std::string timestamp;  // empty when the line failed the grammar
    std::string level;
    std::string logger;  // optional dotted logger name before ':'
    std::string payload;
    std::vector<std::string> tokens;  // split_tokens(payload)
};

/// Splits on runs of whitespace; punctuation stays attached to its word.
std::vector<std::string> split_tokens(const std::string& text);

LogMessage parse_log_line(const std::string& line,
                          const LogLineGrammar& grammar = {});

/// Winning match for one log message.
struct MatchResult {
    LogTemplate tmpl;                         // maximizes static_char_count
    std::vector<LogTemplate> all_candidates;  // winner first, then runners-up
    std::string method_signature;             // code point
    int line = 0;
};

/// Non-pruned recursive prefix-tree match: exact-token descent plus wildcard
/// descent consuming one-or-more tokens; collects every terminal match and
/// returns the candidate with the most static characters (ties: smallest
/// (origin signature, line), then rendered text, then branch path).
std::optional<MatchResult> match_log(const TemplateTree& tree, const LogMessage& msg);

/// A (method, line) position attributed to a report line.
struct CodePoint {
    enum class Source { Log, StackFrame };
    std::string method_signature;
    int line = 0;
    Source source = Source::Log;
    std::vector<BranchStep> branch_path;  // matched template's path (Log only)
    std::string detail;  // rendered template / frame text, for artifacts
    bool operator==(const CodePoint&) const = default;
};

/// One `at pkg.Class.method(File.java:123)` frame.
struct StackFrame {
    std::string class_fq;
    std::string method;
    std::string file;
    int line = 0;
    bool operator==(const StackFrame&) const = default;
};

/// Extracts frames from free text; non-frame lines are skipped.
std::vector<StackFrame> parse_stack_trace(const std::string& text);

struct AttributionResult {
    std::vector<CodePoint> points;  // log lines first, then frames, in order
    std::vector<std::string> unmatched_lines;
    std::vector<std::string> unresolved_frames;
};

/// Resolves report log lines via match_log and stack frames via class+method
/// lookup (preferring the declaration whose span contains the frame line).
AttributionResult attribute_report(const CodeFacts& facts, const TemplateTree& tree,
                                   const IssueReport& report,
                                   const LogLineGrammar& grammar = {});

/// JSONL row: {"tokens": [...], "origin": {...}, "branch_path": [...]}.
nlohmann::ordered_json template_to_json(const LogTemplate& t);
LogTemplate template_from_json(const nlohmann::json& j);

}  // namespace causeway
