#include "causeway/inference.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <set>

namespace causeway {

// ---------------------------------------------------------------------------
// BM25 example selection

std::vector<std::string> issue_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        for (char& c : cur) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.push_back(cur);
        cur.clear();
    };
    auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
    auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
    auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (!alnum(c)) {
            flush();
            continue;
        }
        if (!cur.empty()) {
            char p = cur.back();
            bool hump = (lower(p) && upper(c)) ||
                        (upper(p) && upper(c) && i + 1 < text.size() &&
                         lower(text[i + 1])) ||
                        (digit(p) != digit(c));
            if (hump) flush();
        }
        cur += c;
    }
    flush();
    return out;
}

namespace {

constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;

std::vector<std::string> example_doc_tokens(const HistoricalExample& e) {
    std::string doc = e.report.title + " " + e.report.description;
    for (const std::string& c : e.components) doc += " " + c;
    return issue_tokens(doc);
}

}  // namespace

std::vector<double> bm25_scores(const IssueReport& query,
                                const std::vector<HistoricalExample>& corpus) {
    std::vector<double> scores(corpus.size(), 0.0);
    if (corpus.empty()) return scores;

    std::vector<std::vector<std::string>> docs;
    double total_len = 0;
    for (const HistoricalExample& e : corpus) {
        docs.push_back(example_doc_tokens(e));
        total_len += static_cast<double>(docs.back().size());
    }
    double avgdl = total_len / static_cast<double>(docs.size());

    std::vector<std::string> qtoks = issue_tokens(query.title + " " + query.description);
    std::set<std::string> unique_terms(qtoks.begin(), qtoks.end());
    double n = static_cast<double>(docs.size());
    for (const std::string& term : unique_terms) {
        double df = 0;
        for (const auto& d : docs)
            if (std::find(d.begin(), d.end(), term) != d.end()) ++df;
        double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        for (size_t i = 0; i < docs.size(); ++i) {
            double tf =
                static_cast<double>(std::count(docs[i].begin(), docs[i].end(), term));
            if (tf == 0) continue;
            double dl = static_cast<double>(docs[i].size());
            double denom =
                tf + kBm25K1 * (1.0 - kBm25B + kBm25B * dl / (avgdl == 0 ? 1.0 : avgdl));
            scores[i] += idf * tf * (kBm25K1 + 1.0) / denom;
        }
    }
    return scores;
}

std::vector<HistoricalExample> bm25_rank(const IssueReport& query,
                                         const std::vector<HistoricalExample>& corpus,
                                         size_t n) {
    std::vector<double> scores = bm25_scores(query, corpus);
    std::vector<size_t> order(corpus.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return corpus[a].report.id < corpus[b].report.id;
    });
    std::vector<HistoricalExample> out;
    for (size_t i = 0; i < order.size() && out.size() < n; ++i)
        out.push_back(corpus[order[i]]);
    return out;
}

// ---------------------------------------------------------------------------
// Prompt assembly

namespace {

std::string single_line(const std::string& text) {
    std::string out;
    for (char c : text) out += (c == '\n') ? ' ' : c;
    return out;
}

void render_report_section(std::string& p, const IssueReport& report) {
    p += "# Issue report\n";
    p += "id: " + report.id + "\n";
    p += "system: " + report.system + "\n";
    p += "version: " + report.version + "\n";
    p += "title: " + report.title + "\n";
    p += "description:\n" + report.description + "\n";
    if (!report.log_lines.empty()) {
        p += "logs:\n";
        for (const std::string& l : report.log_lines) p += "  " + l + "\n";
    }
    if (!report.stack_trace.empty())
        p += "stack trace:\n" + report.stack_trace + "\n";
}

std::string render_path_line(const ExecutionPath& path) {
    std::string line = "- ";
    for (size_t i = 0; i < path.steps.size(); ++i) {
        if (i > 0)
            line += path.unlinked
                        ? " -x- "
                        : (path.steps[i].entry_reason == PathStep::Entry::RpcHop
                               ? " =rpc=> "
                               : " -> ");
        line += path.steps[i].signature;
    }
    if (path.unlinked) line += " (unlinked)";
    if (!path.taken_branches.empty()) {
        line += " [branches:";
        for (const BranchStep& b : path.taken_branches)
            line += " " + b.if_id + (b.taken ? "+" : "-");
        line += "]";
    }
    return line;
}

std::string render_diagnosis_prompt(
    const IssueReport& report, const std::vector<ExecutionPath>& paths,
    const std::vector<RetrievalSelection::Snippet>& snippets,
    const std::vector<HistoricalExample>& examples) {
    std::string p;
    render_report_section(p, report);

    p += "\n# Reconstructed execution paths\n";
    if (paths.empty())
        p += "(no execution paths)\n";
    else
        for (const ExecutionPath& path : paths) p += render_path_line(path) + "\n";

    p += "\n# Retrieved method bodies\n";
    if (snippets.empty())
        p += "(no code snippets retrieved)\n";
    else
        for (const auto& s : snippets) {
            p += "## " + s.signature + "\n";
            p += "doc: " + single_line(s.doc_summary) + "\n";
            p += "```\n" + s.body_text;
            if (!s.body_text.empty() && s.body_text.back() != '\n') p += "\n";
            p += "```\n";
        }

    p += "\n# Historical examples\n";
    if (examples.empty())
        p += "(no historical examples)\n";
    else
        for (size_t i = 0; i < examples.size(); ++i) {
            const HistoricalExample& e = examples[i];
            p += "## Example " + std::to_string(i + 1) + ": " + e.report.id + "\n";
            p += "title: " + e.report.title + "\n";
            p += "description:\n" + e.report.description + "\n";
            p += "root cause: " + single_line(e.root_cause_summary) + "\n";
            p += "components: ";
            for (size_t c = 0; c < e.components.size(); ++c)
                p += (c ? ", " : "") + e.components[c];
            p += "\n";
        }

    p += "\n# Task\n";
    p += "Diagnose the root cause of the reported issue using the material "
         "above.\n";
    p += "Respond with exactly two fenced sections.\n";
    p += "First the root cause summary:\n";
    p += "```summary\n<prose explanation of why the failure occurred>\n```\n";
    p += "Then the responsible components:\n";
    p += "```components\nPRIMARY SET\n<the exact set of root-cause components, "
         "one per line>\nRANKED\n<components ranked by likelihood, one per "
         "line>\n```\n";
    return p;
}

}  // namespace

PromptBundle assemble_prompt(const IssueReport& report,
                             const std::vector<ExecutionPath>& paths,
                             const RetrievalSelection& selection,
                             const std::vector<HistoricalExample>& examples,
                             const PromptBudget& budget) {
    PromptBundle bundle;
    std::vector<RetrievalSelection::Snippet> snippets = selection.resolved;
    std::vector<HistoricalExample> kept_examples = examples;
    const size_t budget_chars = static_cast<size_t>(budget.token_budget) *
                                static_cast<size_t>(budget.chars_per_token);

    bundle.text = render_diagnosis_prompt(report, paths, snippets, kept_examples);
    while (bundle.text.size() > budget_chars) {
        if (!snippets.empty()) {
            // Drop the highest order_hint; among equals the later entry goes
            // first, so the front of the selection survives longest.
            size_t drop = 0;
            for (size_t i = 1; i < snippets.size(); ++i)
                if (snippets[i].order_hint >= snippets[drop].order_hint) drop = i;
            bundle.dropped_snippets.push_back(snippets[drop].signature);
            snippets.erase(snippets.begin() + static_cast<std::ptrdiff_t>(drop));
        } else if (kept_examples.size() > 1) {
            bundle.dropped_examples.push_back(kept_examples.back().report.id);
            kept_examples.pop_back();
        } else {
            bundle.over_budget = true;  // only the report and one example left
            break;
        }
        bundle.text = render_diagnosis_prompt(report, paths, snippets, kept_examples);
    }
    return bundle;
}

// ---------------------------------------------------------------------------
// Completion parsing

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

/// Tagged fenced sections in order; an unclosed final fence runs to EOF.
std::vector<std::pair<std::string, std::string>> fenced_sections(
    const std::string& raw) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> lines = split_lines(raw);
    std::string tag, content;
    bool inside = false;
    for (const std::string& line : lines) {
        std::string t = trim(line);
        if (t.rfind("```", 0) == 0) {
            if (!inside) {
                inside = true;
                tag = lower(trim(t.substr(3)));
                content.clear();
            } else {
                out.push_back({tag, content});
                inside = false;
                // a tag after the closing fence opens the next section
                std::string next = lower(trim(t.substr(3)));
                if (!next.empty()) {
                    inside = true;
                    tag = next;
                    content.clear();
                }
            }
            continue;
        }
        if (inside) content += line + "\n";
    }
    if (inside) out.push_back({tag, content});
    return out;
}

std::string normalize_component(const std::string& s) {
    std::string out;
    bool space = false;
    for (char c : trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !out.empty()) out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string> dedupe_normalized(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const std::string& s : in)
        if (seen.insert(normalize_component(s)).second) out.push_back(s);
    return out;
}

}  // namespace

Diagnosis parse_diagnosis(const std::string& raw, int k) {
    Diagnosis d;
    d.raw_model_output = raw;

    std::optional<std::string> summary, components;
    for (const auto& [tag, content] : fenced_sections(raw)) {
        if (tag == "summary" && !summary) summary = content;
        if (tag == "components" && !components) components = content;
    }

    if (summary) {
        std::string s = *summary;
        while (!s.empty() && s.back() == '\n') s.pop_back();
        d.summary = s;
    } else {
        d.summary = raw;  // fall back to the whole completion
        d.provenance.malformed_output = true;
    }

    if (!components) {
        d.provenance.malformed_output = true;
        return d;
    }

    std::vector<std::string> items;  // non-empty trimmed lines
    std::ptrdiff_t primary_at = -1, ranked_at = -1;
    for (const std::string& line : split_lines(*components)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("- ", 0) == 0 || t.rfind("* ", 0) == 0) t = trim(t.substr(2));
        std::string marker = lower(t);
        if (marker == "primary set" && primary_at < 0) {
            primary_at = static_cast<std::ptrdiff_t>(items.size());
            items.push_back("\x01primary");
            continue;
        }
        if (marker == "ranked" && ranked_at < 0) {
            ranked_at = static_cast<std::ptrdiff_t>(items.size());
            items.push_back("\x01ranked");
            continue;
        }
        items.push_back(t);
    }

    std::vector<std::string> primary, ranked;
    if (primary_at < 0) {
        // No PRIMARY SET marker: first line is the committed set, all lines
        // form the ranking.
        for (const std::string& it : items) {
            if (it == "\x01ranked") continue;
            if (primary.empty()) primary.push_back(it);
            ranked.push_back(it);
        }
    } else {
        std::ptrdiff_t end = ranked_at >= 0 ? ranked_at : static_cast<std::ptrdiff_t>(items.size());
        for (std::ptrdiff_t i = primary_at + 1; i < end; ++i) primary.push_back(items[i]);
        if (ranked_at >= 0)
            for (size_t i = static_cast<size_t>(ranked_at) + 1; i < items.size(); ++i)
                ranked.push_back(items[i]);
        else
            ranked = primary;  // no RANKED marker: the primary group ranks itself
    }

    d.primary_components = dedupe_normalized(primary);
    d.ranked_components = dedupe_normalized(ranked);
    if (static_cast<int>(d.ranked_components.size()) > k)
        d.ranked_components.resize(static_cast<size_t>(k));
    return d;
}

// ---------------------------------------------------------------------------
// Orchestration

Diagnosis diagnose(const IssueReport& report, const CodeFacts& facts,
                   const std::vector<LabeledIssue>& corpus, LlmClient& llm,
                   const DiagnoseConfig& config, PhaseTimings* timings,
                   DiagnoseArtifacts* artifacts) {
    DiagnoseArtifacts local;
    DiagnoseArtifacts& art = artifacts ? *artifacts : local;

    auto now = [] { return std::chrono::steady_clock::now(); };
    auto last = now();
    auto phase = [&](const char* name) {
        auto t = now();
        if (timings)
            timings->phases_ms.push_back(
                {name, std::chrono::duration<double, std::milli>(t - last).count()});
        last = t;
    };

    art.restoration = restore_templates(facts);
    TemplateTree tree = build_tree(art.restoration.templates);
    phase("templates");

    art.attribution = attribute_report(facts, tree, report);
    phase("match");

    RpcBridgeResult bridged = bridge_rpcs(build_call_graph(facts), facts);
    art.paths = reconstruct_paths(bridged.graph, facts, art.attribution.points,
                                  config.max_depth, config.max_paths_per_segment);
    phase("paths");

    art.index = build_index(art.paths, facts);
    phase("index");

    if (!art.index.empty())
        art.selection =
            retrieve_snippets(report, art.index, facts, llm, config.retrieval_cap);
    phase("retrieve");

    std::vector<HistoricalExample> pool;
    for (const LabeledIssue& li : corpus)
        if (li.report.id != report.id) pool.push_back(to_example(li));
    art.examples = bm25_rank(report, pool, static_cast<size_t>(config.examples_n));
    phase("examples");

    art.prompt = assemble_prompt(report, art.paths, art.selection, art.examples,
                                 config.budget);
    phase("prompt");

    std::string raw = llm.complete(art.prompt.text, 0.0);
    phase("complete");

    Diagnosis d = parse_diagnosis(raw, config.ranked_k);
    phase("parse");

    // Provenance: what reached the prompt, plus every degradation.
    std::set<std::string> dropped_ex(art.prompt.dropped_examples.begin(),
                                     art.prompt.dropped_examples.end());
    for (const HistoricalExample& e : art.examples)
        if (!dropped_ex.count(e.report.id))
            d.provenance.examples_used.push_back(e.report.id);
    std::set<std::string> dropped_sn(art.prompt.dropped_snippets.begin(),
                                     art.prompt.dropped_snippets.end());
    for (const auto& s : art.selection.resolved)
        if (!dropped_sn.count(s.signature))
            d.provenance.snippets_used.push_back(s.signature);
    d.provenance.paths_used = static_cast<int>(art.paths.size());
    d.provenance.code_free = art.attribution.points.empty();

    auto& notes = d.provenance.notes;
    if (!art.restoration.diagnostics.empty())
        notes.push_back(std::to_string(art.restoration.diagnostics.size()) +
                        " logging statement(s) degraded during restoration");
    if (!art.attribution.unmatched_lines.empty())
        notes.push_back(std::to_string(art.attribution.unmatched_lines.size()) +
                        " log line(s) matched no template");
    if (!art.attribution.unresolved_frames.empty())
        notes.push_back(std::to_string(art.attribution.unresolved_frames.size()) +
                        " stack frame(s) did not resolve");
    for (const std::string& w : bridged.warnings) notes.push_back("rpc: " + w);
    for (const std::string& u : bridged.unresolved_bindings)
        notes.push_back("rpc: " + u);
    size_t unlinked = 0;
    for (const ExecutionPath& p : art.paths) unlinked += p.unlinked ? 1 : 0;
    if (unlinked)
        notes.push_back(std::to_string(unlinked) + " segment(s) unlinked within depth " +
                        std::to_string(config.max_depth));
    if (art.selection.used_fallback)
        notes.push_back("retrieval reply had no fenced block; fell back to index order");
    for (const std::string& s : art.prompt.dropped_snippets)
        notes.push_back("budget drop: snippet " + s);
    for (const std::string& e : art.prompt.dropped_examples)
        notes.push_back("budget drop: example " + e);
    if (art.prompt.over_budget)
        notes.push_back("prompt still over budget after all drops");
    if (d.provenance.code_free)
        notes.push_back("no code points resolved from the report");
    return d;
}

}  // namespace causeway
