#pragma once

#include <map>
#include <string>
#include <vector>

#include "causeway/issue.hpp"
#include "causeway/llm.hpp"
#include "causeway/logsource.hpp"
#include "causeway/pathrecon.hpp"
#include "causeway/profiler.hpp"

namespace causeway {

/// The structured diagnosis parsed from the model's completion.
struct Diagnosis {
    std::string summary;
    std::vector<std::string> ranked_components;   // no duplicates, ≤ k
    std::vector<std::string> primary_components;  // the exact-match set
    std::string raw_model_output;

    struct Provenance {
        std::vector<std::string> examples_used;  // issue ids, prompt order
        std::vector<std::string> snippets_used;  // signatures left in the prompt
        int paths_used = 0;
        std::vector<std::string> notes;  // degradations, drops, fallbacks
        bool malformed_output = false;   // a fenced section was missing
        bool code_free = false;          // no code point resolved
        bool operator==(const Provenance&) const = default;
    } provenance;

    bool operator==(const Diagnosis&) const = default;
};

/// BM25 tokenizer: lowercase, split on non-alphanumerics and at camelCase
/// humps ("RMAppManager" → rm, app, manager).
std::vector<std::string> issue_tokens(const std::string& text);

/// BM25 score (k1=1.2, b=0.75) of the query report against every example's
/// document (title + description + components), in corpus order.
std::vector<double> bm25_scores(const IssueReport& query,
                                const std::vector<HistoricalExample>& corpus);

/// Top-n examples by descending score, ties by ascending id. The caller
/// excludes the query's own id from the corpus.
std::vector<HistoricalExample> bm25_rank(const IssueReport& query,
                                         const std::vector<HistoricalExample>& corpus,
                                         size_t n = 5);

struct PromptBudget {
    int token_budget = 24000;
    int chars_per_token = 4;
};

/// The assembled prompt plus what was dropped to fit the budget.
struct PromptBundle {
    std::string text;
    std::vector<std::string> dropped_snippets;  // signatures, drop order
    std::vector<std::string> dropped_examples;  // ids, drop order
    bool over_budget = false;  // still too large with everything droppable gone
};

/// Deterministic five-section layout: report, execution paths, retrieved
/// bodies, historical examples, task instructions. Over budget, snippets are
/// dropped highest-order_hint-first, then examples from the end (the first
/// example and the report always stay).
PromptBundle assemble_prompt(const IssueReport& report,
                             const std::vector<ExecutionPath>& paths,
                             const RetrievalSelection& selection,
                             const std::vector<HistoricalExample>& examples,
                             const PromptBudget& budget = {});

/// Extracts the ```summary and ```components sections. Missing summary →
/// whole raw text as summary, flagged. Missing components → empty lists,
/// flagged. The PRIMARY SET group feeds primary_components; the RANKED group
/// (deduplicated, truncated to k) feeds ranked_components.
Diagnosis parse_diagnosis(const std::string& raw, int k);

struct DiagnoseConfig {
    int max_depth = 2;
    int examples_n = 5;
    int retrieval_cap = 10;
    int ranked_k = 5;
    int max_paths_per_segment = 5;
    PromptBudget budget;
};

/// Wall-clock milliseconds per pipeline phase, in execution order.
struct PhaseTimings {
    std::vector<std::pair<std::string, double>> phases_ms;
};

/// Intermediate products of a diagnose run, for artifact writing and tests.
struct DiagnoseArtifacts {
    RestorationResult restoration;
    AttributionResult attribution;
    std::vector<ExecutionPath> paths;
    std::vector<CodeIndexEntry> index;
    RetrievalSelection selection;
    std::vector<HistoricalExample> examples;
    PromptBundle prompt;
};

/// Full phase-I…IV orchestration; degradations flow into provenance, never
/// abort. Only LlmUnavailable propagates.
Diagnosis diagnose(const IssueReport& report, const CodeFacts& facts,
                   const std::vector<LabeledIssue>& corpus, LlmClient& llm,
                   const DiagnoseConfig& config = {},
                   PhaseTimings* timings = nullptr,
                   DiagnoseArtifacts* artifacts = nullptr);

}  // namespace causeway
