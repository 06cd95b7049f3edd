#include "causeway/profiler.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace causeway {

std::vector<CodeIndexEntry> build_index(const std::vector<ExecutionPath>& paths,
                                        const CodeFacts& facts) {
    struct Acc {
        std::vector<size_t> path_ids;
        int order_hint = 0;
    };
    std::map<std::string, Acc> acc;
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        for (size_t si = 0; si < paths[pi].steps.size(); ++si) {
            const std::string& sig = paths[pi].steps[si].signature;
            auto [it, fresh] = acc.try_emplace(sig);
            if (fresh)
                it->second.order_hint = static_cast<int>(si);
            else
                it->second.order_hint =
                    std::min(it->second.order_hint, static_cast<int>(si));
            if (it->second.path_ids.empty() || it->second.path_ids.back() != pi)
                it->second.path_ids.push_back(pi);
        }
    }
    std::vector<CodeIndexEntry> out;
    for (const auto& [sig, a] : acc) {
        CodeIndexEntry e;
        e.signature = sig;
        const MethodDecl* m = facts.find_method(sig);
        e.doc_summary = (m && m->doc_comment && !m->doc_comment->empty())
                            ? *m->doc_comment
                            : std::string("(no doc)");
        e.path_ids = a.path_ids;
        e.order_hint = a.order_hint;
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(),
              [](const CodeIndexEntry& a, const CodeIndexEntry& b) {
                  if (a.order_hint != b.order_hint) return a.order_hint < b.order_hint;
                  return a.signature < b.signature;
              });
    return out;
}

namespace {

std::string single_line(const std::string& text) {
    std::string out;
    for (char c : text) out += (c == '\n') ? ' ' : c;
    return out;
}

}  // namespace

std::string render_retrieval_prompt(const IssueReport& report,
                                    const std::vector<CodeIndexEntry>& index) {
    std::string p;
    p += "# Issue report\n";
    p += "id: " + report.id + "\n";
    p += "system: " + report.system + "\n";
    p += "title: " + report.title + "\n";
    p += "description:\n" + report.description + "\n";
    if (!report.log_lines.empty()) {
        p += "logs:\n";
        for (const std::string& l : report.log_lines) p += "  " + l + "\n";
    }
    if (!report.stack_trace.empty()) p += "stack trace:\n" + report.stack_trace + "\n";
    p += "\n# Code snippet indexes\n";
    for (const CodeIndexEntry& e : index)
        p += e.signature + " — " + single_line(e.doc_summary) + "\n";
    p += "\n# Task\n";
    p += "Decide which of the indexed methods you need to read in full to "
         "diagnose the issue. Return only their signatures, one per line, "
         "inside a fenced code block.\n";
    return p;
}

namespace {

/// Lines inside the first fenced block; std::nullopt when no block closes.
std::optional<std::vector<std::string>> fenced_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    std::vector<std::string> all;
    for (char c : text) {
        if (c == '\n') {
            all.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    all.push_back(cur);
    int open = -1;
    for (size_t i = 0; i < all.size(); ++i) {
        std::string t = all[i];
        size_t s = t.find_first_not_of(" \t");
        if (s == std::string::npos || t.compare(s, 3, "```") != 0) continue;
        if (open < 0) {
            open = static_cast<int>(i);
        } else {
            for (size_t k = open + 1; k < i; ++k) lines.push_back(all[k]);
            return lines;
        }
    }
    return std::nullopt;
}

/// Signature normalization: strip list bullets and all whitespace.
std::string normalize_signature(const std::string& line) {
    std::string t = line;
    size_t s = t.find_first_not_of(" \t");
    if (s == std::string::npos) return "";
    t = t.substr(s);
    if (t.rfind("- ", 0) == 0 || t.rfind("* ", 0) == 0) t = t.substr(2);
    std::string out;
    for (char c : t)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

RetrievalSelection::Snippet make_snippet(const CodeIndexEntry& entry,
                                         const CodeFacts& facts) {
    RetrievalSelection::Snippet s;
    s.signature = entry.signature;
    s.doc_summary = entry.doc_summary;
    s.order_hint = entry.order_hint;
    if (const MethodDecl* m = facts.find_method(entry.signature)) {
        s.body_text = render_block(m->body, 0);
        s.line_span = m->line_span;
    }
    return s;
}

}  // namespace

RetrievalSelection retrieve_snippets(const IssueReport& report,
                                     const std::vector<CodeIndexEntry>& index,
                                     const CodeFacts& facts, LlmClient& llm,
                                     int cap) {
    RetrievalSelection sel;
    if (index.empty() || cap <= 0) return sel;

    std::map<std::string, const CodeIndexEntry*> universe;
    for (const CodeIndexEntry& e : index) universe[e.signature] = &e;

    std::string reply = llm.complete(render_retrieval_prompt(report, index), 0.0);
    std::optional<std::vector<std::string>> block = fenced_lines(reply);
    if (!block) {
        // Malformed selection: fall back to the leading index entries.
        sel.used_fallback = true;
        for (const CodeIndexEntry& e : index) {
            if (static_cast<int>(sel.resolved.size()) == cap) break;
            sel.requested_signatures.push_back(e.signature);
            sel.resolved.push_back(make_snippet(e, facts));
        }
        return sel;
    }

    std::set<std::string> seen;
    for (const std::string& line : *block) {
        if (static_cast<int>(sel.requested_signatures.size()) == cap) break;
        std::string sig = normalize_signature(line);
        if (sig.empty() || !seen.insert(sig).second) continue;
        sel.requested_signatures.push_back(sig);
        auto it = universe.find(sig);
        if (it != universe.end())
            sel.resolved.push_back(make_snippet(*it->second, facts));
        else
            sel.unresolved.push_back(sig);
    }
    return sel;
}

}  // namespace causeway
