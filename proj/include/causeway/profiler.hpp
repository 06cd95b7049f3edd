#pragma once

#include <string>
#include <vector>

#include "causeway/cfir.hpp"
#include "causeway/issue.hpp"
#include "causeway/llm.hpp"
#include "causeway/pathrecon.hpp"

namespace causeway {

/// One row of the code snippet index the LLM chooses from.
struct CodeIndexEntry {
    std::string signature;
    std::string doc_summary;  // doc comment, or "(no doc)"
    std::vector<size_t> path_ids;  // indices of paths containing the method
    int order_hint = 0;  // earliest step position across those paths
    bool operator==(const CodeIndexEntry&) const = default;
};

/// One entry per distinct signature on any path, ordered by order_hint then
/// signature.
std::vector<CodeIndexEntry> build_index(const std::vector<ExecutionPath>& paths,
                                        const CodeFacts& facts);

/// Outcome of the retrieval round.
struct RetrievalSelection {
    struct Snippet {
        std::string signature;
        std::string doc_summary;
        std::string body_text;  // rendered statements of the method body
        LineSpan line_span;
        int order_hint = 0;
        bool operator==(const Snippet&) const = default;
    };
    std::vector<std::string> requested_signatures;  // normalized, capped
    std::vector<Snippet> resolved;
    std::vector<std::string> unresolved;
    bool used_fallback = false;  // reply had no fenced block
    bool operator==(const RetrievalSelection&) const = default;
};

/// The retrieval prompt: issue report, then "Code snippet indexes" lines in
/// index order, then the instruction to answer with signatures in a fenced
/// block.
std::string render_retrieval_prompt(const IssueReport& report,
                                    const std::vector<CodeIndexEntry>& index);

/// Asks the LLM which method bodies to read. Signatures resolve only against
/// `index` (the retrieval universe); unknown or unparseable lines land in
/// unresolved. A reply without a fenced block falls back to the first `cap`
/// index entries and flags used_fallback. Requests are truncated to `cap`.
RetrievalSelection retrieve_snippets(const IssueReport& report,
                                     const std::vector<CodeIndexEntry>& index,
                                     const CodeFacts& facts, LlmClient& llm,
                                     int cap = 10);

}  // namespace causeway
