#include "causeway/logsource.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>
#include <set>

namespace causeway {

std::string LogTemplate::rendered() const {
    std::string out;
    for (const Token& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t.text;
    }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Restoration: backward value tracing per logging statement

struct Piece {
    bool hole = false;
    std::string text;  // static fragment when !hole
};
using Shape = std::vector<Piece>;

struct Alt {
    Shape shape;
    std::map<int, bool> branches;  // if preorder index → taken arm
};

struct TraceResult {
    std::vector<Alt> alts;
    bool exceeded = false;
    std::string reason;
};

/// Scan position: innermost frame last; the statement of interest is
/// frames.back().block[frames.back().index], and backward scans walk indices
/// downward, popping to the enclosing block when a frame is exhausted.
struct Frame {
    const Block* block;
    int index;
};

bool block_assigns(const Block& b, const std::string& var) {
    for (const Statement& s : b) {
        if ((s.kind == Statement::Kind::Assign || s.kind == Statement::Kind::Decl) &&
            s.var == var)
            return true;
        if (s.kind == Statement::Kind::If &&
            (block_assigns(s.then_block, var) || block_assigns(s.else_block, var)))
            return true;
    }
    return false;
}

class Restorer {
  public:
    Restorer(const MethodDecl& method, const RestorationLimits& limits)
        : method_(method), limits_(limits) {
        int counter = 0;
        index_ifs(method.body, counter);
    }

    /// Templates for the log call at stmt_path with argument `arg`.
    TraceResult run(const std::vector<int>& stmt_path, const Expr& arg,
                    std::vector<std::pair<int, bool>>& enclosing_out) {
        std::vector<Frame> pos;
        const Block* block = &method_.body;
        for (size_t i = 0; i < stmt_path.size(); ++i) {
            int idx = stmt_path[i];
            pos.push_back({block, idx});
            const Statement& s = (*block)[idx];
            if (i + 1 < stmt_path.size()) {
                int arm = stmt_path[++i];
                enclosing_out.push_back({if_index_.at(&s), arm == 0});
                block = arm == 0 ? &s.then_block : &s.else_block;
            }
        }
        return eval_expr(arg, pos, 0);
    }

    int if_index_of(const Statement* s) const { return if_index_.at(s); }

  private:
    void index_ifs(const Block& b, int& counter) {
        for (const Statement& s : b) {
            if (s.kind == Statement::Kind::If) {
                if_index_[&s] = counter++;
                index_ifs(s.then_block, counter);
                index_ifs(s.else_block, counter);
            }
        }
    }

    TraceResult over_bound(const std::string& reason) const {
        TraceResult r;
        r.exceeded = true;
        r.reason = reason;
        return r;
    }

    static std::optional<std::map<int, bool>> merge_branches(
        const std::map<int, bool>& a, const std::map<int, bool>& b) {
        std::map<int, bool> out = a;
        for (const auto& [k, v] : b) {
            auto it = out.find(k);
            if (it != out.end() && it->second != v) return std::nullopt;  // infeasible
            out[k] = v;
        }
        return out;
    }

    TraceResult eval_expr(const Expr& e, const std::vector<Frame>& pos, int depth) {
        switch (e.kind) {
            case Expr::Kind::StrLit: {
                TraceResult r;
                r.alts.push_back({{{false, e.text}}, {}});
                return r;
            }
            case Expr::Kind::VarRef:
                return trace_var(e.text, pos, depth);
            case Expr::Kind::Concat: {
                TraceResult l = eval_expr(e.parts[0], pos, depth);
                if (l.exceeded) return l;
                TraceResult rr = eval_expr(e.parts[1], pos, depth);
                if (rr.exceeded) return rr;
                TraceResult out;
                for (const Alt& la : l.alts)
                    for (const Alt& ra : rr.alts) {
                        auto merged = merge_branches(la.branches, ra.branches);
                        if (!merged) continue;  // conflicting arms: infeasible
                        Alt a;
                        a.shape = la.shape;
                        a.shape.insert(a.shape.end(), ra.shape.begin(), ra.shape.end());
                        a.branches = std::move(*merged);
                        out.alts.push_back(std::move(a));
                    }
                if (static_cast<int>(out.alts.size()) >
                    limits_.max_templates_per_statement)
                    return over_bound("branch bound exceeded");
                return out;
            }
            case Expr::Kind::Call:
            case Expr::Kind::Other: {
                TraceResult r;
                r.alts.push_back({{{true, ""}}, {}});
                return r;
            }
        }
        TraceResult r;
        r.alts.push_back({{{true, ""}}, {}});
        return r;
    }

    /// Value of `var` just before the statement the position names.
    TraceResult trace_var(const std::string& var, std::vector<Frame> pos, int depth) {
        if (depth >= limits_.max_assign_hops)
            return over_bound("assignment depth bound exceeded");
        while (!pos.empty()) {
            Frame f = pos.back();
            for (int j = f.index - 1; j >= 0; --j) {
                const Statement& s = (*f.block)[j];
                if ((s.kind == Statement::Kind::Assign ||
                     s.kind == Statement::Kind::Decl) &&
                    s.var == var) {
                    std::vector<Frame> at = pos;
                    at.back().index = j;
                    if (s.value) return eval_expr(*s.value, at, depth + 1);
                    TraceResult r;  // bare declaration: unknown initial value
                    r.alts.push_back({{{true, ""}}, {}});
                    return r;
                }
                if (s.kind == Statement::Kind::If &&
                    (block_assigns(s.then_block, var) ||
                     block_assigns(s.else_block, var))) {
                    int id = if_index_.at(&s);
                    TraceResult out;
                    for (int arm = 0; arm < 2; ++arm) {
                        const Block& armb = arm == 0 ? s.then_block : s.else_block;
                        std::vector<Frame> at = pos;
                        at.back().index = j;
                        at.push_back({&armb, static_cast<int>(armb.size())});
                        TraceResult sub = trace_var(var, at, depth);
                        if (sub.exceeded) return sub;
                        for (Alt& a : sub.alts) {
                            a.branches[id] = (arm == 0);  // cannot conflict: the
                            // backward scan never re-enters this if statement
                            out.alts.push_back(std::move(a));
                        }
                    }
                    if (static_cast<int>(out.alts.size()) >
                        limits_.max_templates_per_statement)
                        return over_bound("branch bound exceeded");
                    return out;
                }
            }
            pos.pop_back();
        }
        TraceResult r;  // parameter, field, or never assigned
        r.alts.push_back({{{true, ""}}, {}});
        return r;
    }

    const MethodDecl& method_;
    RestorationLimits limits_;
    std::map<const Statement*, int> if_index_;
};

// ---------------------------------------------------------------------------
// Shape → canonical token sequence

std::vector<Token> shape_to_tokens(const Shape& shape) {
    struct Frag {
        bool hole;
        std::string text;
    };
    std::vector<std::vector<Frag>> words;
    std::vector<Frag> cur;
    auto flush_word = [&] {
        if (!cur.empty()) {
            words.push_back(cur);
            cur.clear();
        }
    };
    for (const Piece& p : shape) {
        if (p.hole) {
            cur.push_back({true, ""});
            continue;
        }
        std::string run;
        for (char c : p.text) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!run.empty()) {
                    cur.push_back({false, run});
                    run.clear();
                }
                flush_word();
            } else {
                run += c;
            }
        }
        if (!run.empty()) cur.push_back({false, run});
    }
    flush_word();

    std::vector<Token> toks;
    for (const auto& word : words) {
        bool any_hole = false;
        for (const Frag& f : word) any_hole |= f.hole;
        if (!any_hole) {
            std::string text;
            for (const Frag& f : word) text += f.text;
            toks.push_back(Token::word(text));
            continue;
        }
        std::string deco;
        bool prev_hole = false;
        for (const Frag& f : word) {
            if (f.hole) {
                if (!prev_hole) deco += "<*>";  // adjacent holes collapse
                prev_hole = true;
            } else {
                deco += f.text;
                prev_hole = false;
            }
        }
        toks.push_back(Token::wildcard(std::move(deco)));
    }

    // Coalesce adjacent wildcard tokens; a decoration survives only when the
    // wildcard stands alone.
    std::vector<Token> out;
    for (Token& t : toks) {
        if (t.kind == Token::Kind::Wildcard && !out.empty() &&
            out.back().kind == Token::Kind::Wildcard) {
            out.back().text = "<*>";
            continue;
        }
        out.push_back(std::move(t));
    }
    if (out.empty()) out.push_back(Token::word(""));  // empty-string log call
    return out;
}

int count_static_chars(const std::vector<Token>& toks) {
    int n = 0;
    for (const Token& t : toks)
        if (t.kind == Token::Kind::Static) n += static_cast<int>(t.text.size());
    return n;
}

std::string branch_sort_key(const LogTemplate& t) {
    std::string out;
    for (const auto& s : t.branch_path) {
        out += s.if_id;
        out += s.taken ? '+' : '-';
    }
    return out;
}

}  // namespace

RestorationResult restore_templates(const CodeFacts& facts,
                                    const RestorationLimits& limits) {
    RestorationResult result;
    for (const LogSite& site : facts.logging_statements) {
        const MethodDecl* method = facts.find_method(site.method_signature);
        const Statement* stmt = facts.log_statement(site);
        if (!method || !stmt || !stmt->value) continue;  // validate() prevents this

        Restorer restorer(*method, limits);
        std::vector<std::pair<int, bool>> enclosing;
        TraceResult traced = restorer.run(site.stmt_path, *stmt->value, enclosing);

        auto make_branch_path = [&](const std::map<int, bool>& branches) {
            std::map<int, bool> all(branches);
            for (const auto& [id, taken] : enclosing) all[id] = taken;
            std::vector<BranchStep> path;
            for (const auto& [id, taken] : all)
                path.push_back({site.method_signature + "#" + std::to_string(id), taken});
            return path;
        };

        if (traced.exceeded || traced.alts.empty()) {
            LogTemplate t;
            t.tokens = {Token::wildcard()};
            t.origin_signature = site.method_signature;
            t.origin_line = site.line;
            t.branch_path = make_branch_path({});
            t.static_char_count = 0;
            t.degraded = true;
            result.templates.push_back(std::move(t));
            result.diagnostics.push_back(
                {site.method_signature, site.line,
                 traced.exceeded ? traced.reason : "no feasible value path"});
            continue;
        }

        std::vector<LogTemplate> site_templates;
        for (const Alt& alt : traced.alts) {
            LogTemplate t;
            t.tokens = shape_to_tokens(alt.shape);
            t.origin_signature = site.method_signature;
            t.origin_line = site.line;
            t.branch_path = make_branch_path(alt.branches);
            t.static_char_count = count_static_chars(t.tokens);
            site_templates.push_back(std::move(t));
        }
        std::sort(site_templates.begin(), site_templates.end(),
                  [](const LogTemplate& a, const LogTemplate& b) {
                      std::string ka = branch_sort_key(a), kb = branch_sort_key(b);
                      if (ka != kb) return ka < kb;
                      return a.rendered() < b.rendered();
                  });
        site_templates.erase(std::unique(site_templates.begin(), site_templates.end()),
                             site_templates.end());
        for (auto& t : site_templates) result.templates.push_back(std::move(t));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Prefix tree

TemplateTree build_tree(std::vector<LogTemplate> templates) {
    TemplateTree tree;
    tree.templates = std::move(templates);
    tree.root = std::make_unique<TemplateTree::Node>();
    for (size_t i = 0; i < tree.templates.size(); ++i) {
        TemplateTree::Node* node = tree.root.get();
        for (const Token& t : tree.templates[i].tokens) {
            if (t.kind == Token::Kind::Static) {
                auto& child = node->static_children[t.text];
                if (!child) child = std::make_unique<TemplateTree::Node>();
                node = child.get();
            } else {
                if (!node->wildcard_child)
                    node->wildcard_child = std::make_unique<TemplateTree::Node>();
                node = node->wildcard_child.get();
            }
        }
        node->terminals.push_back(i);
    }
    return tree;
}

namespace {

/// Candidate order: most static characters, then smallest origin, then
/// rendered text, then branch path. Total and deterministic.
bool candidate_less(const LogTemplate& a, const LogTemplate& b) {
    if (a.static_char_count != b.static_char_count)
        return a.static_char_count > b.static_char_count;
    if (a.origin_signature != b.origin_signature)
        return a.origin_signature < b.origin_signature;
    if (a.origin_line != b.origin_line) return a.origin_line < b.origin_line;
    std::string ra = a.rendered(), rb = b.rendered();
    if (ra != rb) return ra < rb;
    return branch_sort_key(a) < branch_sort_key(b);
}

}  // namespace

std::optional<MatchResult> match_log(const TemplateTree& tree, const LogMessage& msg) {
    if (!tree.root) return std::nullopt;
    const std::vector<std::string>& toks = msg.tokens;
    std::set<size_t> found;
    std::set<std::pair<const TemplateTree::Node*, size_t>> visited;

    std::function<void(const TemplateTree::Node*, size_t)> descend =
        [&](const TemplateTree::Node* node, size_t i) {
            if (!visited.insert({node, i}).second) return;
            if (i == toks.size()) {
                for (size_t t : node->terminals) found.insert(t);
                return;
            }
            auto it = node->static_children.find(toks[i]);
            if (it != node->static_children.end()) descend(it->second.get(), i + 1);
            if (node->wildcard_child)
                for (size_t j = i + 1; j <= toks.size(); ++j)
                    descend(node->wildcard_child.get(), j);
        };
    descend(tree.root.get(), 0);

    if (found.empty()) return std::nullopt;
    std::vector<size_t> order(found.begin(), found.end());
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return candidate_less(tree.templates[a], tree.templates[b]);
    });

    MatchResult r;
    r.tmpl = tree.templates[order.front()];
    for (size_t i : order) r.all_candidates.push_back(tree.templates[i]);
    r.method_signature = r.tmpl.origin_signature;
    r.line = r.tmpl.origin_line;
    return r;
}

// ---------------------------------------------------------------------------
// Log-line and stack-trace grammar

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

namespace {

LogMessage parse_with(const std::string& line, const std::vector<std::regex>& res) {
    LogMessage m;
    m.raw = line;
    std::smatch match;
    for (const std::regex& re : res) {
        if (!std::regex_match(line, match, re)) continue;
        m.timestamp = match[1].str();
        m.level = match[2].str();
        std::string rest = match[3].str();
        // Optional logger name: a dotted identifier ending with ':'.
        static const std::regex logger_re(
            R"(^([A-Za-z_$][A-Za-z0-9_$]*(?:\.[A-Za-z0-9_$]+)+):\s*(.*)$)");
        std::smatch lm;
        if (std::regex_match(rest, lm, logger_re)) {
            m.logger = lm[1].str();
            m.payload = lm[2].str();
        } else {
            m.payload = rest;
        }
        m.tokens = split_tokens(m.payload);
        return m;
    }
    m.payload = line;
    m.tokens = split_tokens(m.payload);
    return m;
}

std::vector<std::regex> compile_grammar(const LogLineGrammar& grammar) {
    std::vector<std::regex> res;
    for (const std::string& ts : grammar.timestamp_patterns)
        res.emplace_back("^\\s*(" + ts +
                             ")\\s+(TRACE|DEBUG|INFO|WARN|WARNING|ERROR|FATAL)\\s+(.*)$",
                         std::regex::icase);
    return res;
}

}  // namespace

LogMessage parse_log_line(const std::string& line, const LogLineGrammar& grammar) {
    return parse_with(line, compile_grammar(grammar));
}

std::vector<StackFrame> parse_stack_trace(const std::string& text) {
    static const std::regex frame_re(
        R"(^\s*at\s+([A-Za-z_$][A-Za-z0-9_$.]*)\.([A-Za-z_$<][A-Za-z0-9_$<>]*)\(([^:()]+):(\d+)\)\s*$)");
    std::vector<StackFrame> out;
    std::string line;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            line = text.substr(pos);
            pos = text.size() + 1;
        } else {
            line = text.substr(pos, nl - pos);
            pos = nl + 1;
        }
        std::smatch m;
        if (std::regex_match(line, m, frame_re))
            out.push_back({m[1].str(), m[2].str(), m[3].str(), std::stoi(m[4].str())});
        if (nl == std::string::npos) break;
    }
    return out;
}

namespace {

std::string last_segment(const std::string& dotted) {
    auto pos = dotted.rfind('.');
    return pos == std::string::npos ? dotted : dotted.substr(pos + 1);
}

/// Frame → method: candidates share the simple class name and method name;
/// prefer one whose span contains the frame line, else a unique candidate.
const MethodDecl* resolve_frame(const CodeFacts& facts, const StackFrame& f) {
    std::string simple = last_segment(f.class_fq);
    std::vector<const MethodDecl*> candidates;
    for (const auto& [sig, m] : facts.methods)
        if (m.name == f.method && m.simple_class_name() == simple)
            candidates.push_back(&m);
    for (const MethodDecl* m : candidates)
        if (m->line_span.contains(f.line)) return m;
    if (candidates.size() == 1) return candidates.front();
    return nullptr;
}

}  // namespace

AttributionResult attribute_report(const CodeFacts& facts, const TemplateTree& tree,
                                   const IssueReport& report,
                                   const LogLineGrammar& grammar) {
    AttributionResult out;
    std::vector<std::regex> res = compile_grammar(grammar);
    for (const std::string& raw : report.log_lines) {
        LogMessage msg = parse_with(raw, res);
        std::optional<MatchResult> m = match_log(tree, msg);
        if (!m) {
            out.unmatched_lines.push_back(raw);
            continue;
        }
        CodePoint p;
        p.method_signature = m->method_signature;
        p.line = m->line;
        p.source = CodePoint::Source::Log;
        p.branch_path = m->tmpl.branch_path;
        p.detail = m->tmpl.rendered();
        out.points.push_back(std::move(p));
    }
    for (const StackFrame& f : parse_stack_trace(report.stack_trace)) {
        std::string rendered = "at " + f.class_fq + "." + f.method + "(" + f.file + ":" +
                               std::to_string(f.line) + ")";
        const MethodDecl* m = resolve_frame(facts, f);
        if (!m) {
            out.unresolved_frames.push_back(rendered);
            continue;
        }
        CodePoint p;
        p.method_signature = m->signature;
        p.line = f.line;
        p.source = CodePoint::Source::StackFrame;
        p.detail = rendered;
        out.points.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSONL export

nlohmann::ordered_json template_to_json(const LogTemplate& t) {
    nlohmann::ordered_json o;
    nlohmann::ordered_json toks = nlohmann::ordered_json::array();
    for (const Token& tok : t.tokens) toks.push_back(tok.text);
    o["tokens"] = std::move(toks);
    o["origin"] = {{"signature", t.origin_signature}, {"line", t.origin_line}};
    nlohmann::ordered_json bp = nlohmann::ordered_json::array();
    for (const BranchStep& s : t.branch_path)
        bp.push_back({{"if", s.if_id}, {"taken", s.taken}});
    o["branch_path"] = std::move(bp);
    o["static_chars"] = t.static_char_count;
    o["degraded"] = t.degraded;
    return o;
}

LogTemplate template_from_json(const nlohmann::json& j) {
    LogTemplate t;
    if (!j.is_object() || !j.contains("tokens") || !j.at("tokens").is_array())
        throw FormatError(0, "template row must carry a tokens array");
    for (const auto& tok : j.at("tokens")) {
        if (!tok.is_string()) throw FormatError(0, "template tokens must be strings");
        std::string s = tok.get<std::string>();
        if (s.find("<*>") != std::string::npos)
            t.tokens.push_back(Token::wildcard(s));
        else
            t.tokens.push_back(Token::word(s));
    }
    if (j.contains("origin")) {
        t.origin_signature = j.at("origin").value("signature", std::string());
        t.origin_line = j.at("origin").value("line", 0);
    }
    if (j.contains("branch_path"))
        for (const auto& s : j.at("branch_path"))
            t.branch_path.push_back(
                {s.value("if", std::string()), s.value("taken", false)});
    t.static_char_count = count_static_chars(t.tokens);
    t.degraded = j.value("degraded", false);
    return t;
}

}  // namespace causeway
