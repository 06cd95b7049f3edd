#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracles {

using causeway::LogTemplate;
using causeway::Token;

namespace {

bool anchored_match_from(const std::vector<Token>& toks, std::size_t ti,
                         const std::vector<std::string>& msg, std::size_t mi) {
    if (ti == toks.size()) return mi == msg.size();
    const Token& t = toks[ti];
    if (t.kind == Token::Kind::Static) {
        if (mi < msg.size() && msg[mi] == t.text)
            return anchored_match_from(toks, ti + 1, msg, mi + 1);
        return false;
    }
    // Wildcard: try every way of consuming one-or-more message tokens.
    for (std::size_t consumed = 1; mi + consumed <= msg.size(); ++consumed)
        if (anchored_match_from(toks, ti + 1, msg, mi + consumed)) return true;
    return false;
}

std::string render(const LogTemplate& t) {
    std::string out;
    for (const Token& tok : t.tokens) {
        if (!out.empty()) out += ' ';
        out += tok.text;
    }
    return out;
}

std::string branch_key(const LogTemplate& t) {
    std::string out;
    for (const auto& step : t.branch_path) {
        out += step.if_id;
        out += step.taken ? "+" : "-";
    }
    return out;
}

/// Total order used to pick the winner among candidates.
bool better(const LogTemplate& a, const LogTemplate& b) {
    if (a.static_char_count != b.static_char_count)
        return a.static_char_count > b.static_char_count;
    if (a.origin_signature != b.origin_signature)
        return a.origin_signature < b.origin_signature;
    if (a.origin_line != b.origin_line) return a.origin_line < b.origin_line;
    std::string ra = render(a), rb = render(b);
    if (ra != rb) return ra < rb;
    return branch_key(a) < branch_key(b);
}

}  // namespace

bool anchored_match(const LogTemplate& t, const std::vector<std::string>& msg_tokens) {
    return anchored_match_from(t.tokens, 0, msg_tokens, 0);
}

MatchOracleResult match_oracle(const std::vector<LogTemplate>& templates,
                               const std::vector<std::string>& msg_tokens) {
    MatchOracleResult out;
    for (std::size_t i = 0; i < templates.size(); ++i)
        if (anchored_match(templates[i], msg_tokens)) out.candidates.insert(i);
    for (std::size_t i : out.candidates)
        if (!out.winner || better(templates[i], templates[*out.winner])) out.winner = i;
    return out;
}

std::set<std::vector<std::string>> path_oracle(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::string& from, const std::string& to, int max_hops) {
    std::set<std::vector<std::string>> out;
    std::vector<std::string> cur{from};
    std::function<void(const std::string&, int)> walk = [&](const std::string& node,
                                                            int hops_left) {
        if (node == to) out.insert(cur);
        if (hops_left == 0) return;
        for (const auto& [a, b] : edges) {
            if (a != node) continue;
            if (std::find(cur.begin(), cur.end(), b) != cur.end()) continue;
            cur.push_back(b);
            walk(b, hops_left - 1);
            cur.pop_back();
        }
    };
    walk(from, max_hops);
    return out;
}

std::vector<double> bm25_oracle(const std::vector<std::string>& query_tokens,
                                const std::vector<std::vector<std::string>>& docs,
                                double k1, double b) {
    const std::size_t n_docs = docs.size();
    std::vector<double> scores(n_docs, 0.0);
    if (n_docs == 0) return scores;

    double total_len = 0;
    for (const auto& d : docs) total_len += static_cast<double>(d.size());
    double avgdl = total_len / static_cast<double>(n_docs);

    std::set<std::string> unique_terms(query_tokens.begin(), query_tokens.end());
    for (const std::string& term : unique_terms) {
        std::size_t df = 0;
        for (const auto& d : docs)
            if (std::find(d.begin(), d.end(), term) != d.end()) ++df;
        double idf = std::log((static_cast<double>(n_docs) - static_cast<double>(df) + 0.5) /
                                  (static_cast<double>(df) + 0.5) +
                              1.0);
        for (std::size_t i = 0; i < n_docs; ++i) {
            double tf = static_cast<double>(
                std::count(docs[i].begin(), docs[i].end(), term));
            if (tf == 0) continue;
            double dl = static_cast<double>(docs[i].size());
            double denom = tf + k1 * (1.0 - b + b * dl / (avgdl == 0 ? 1.0 : avgdl));
            scores[i] += idf * tf * (k1 + 1.0) / denom;
        }
    }
    return scores;
}

std::size_t multiset_overlap(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
    std::size_t total = 0;
    std::set<std::string> seen;
    for (const std::string& tok : a) {
        if (seen.count(tok)) continue;
        seen.insert(tok);
        std::size_t ca = 0, cb = 0;
        for (const std::string& x : a)
            if (x == tok) ++ca;
        for (const std::string& x : b)
            if (x == tok) ++cb;
        total += std::min(ca, cb);
    }
    return total;
}

double bleu_disjoint_four_tokens() { return std::pow(1.0 / 120.0, 0.25); }

double bleu_half_prefix() { return std::exp(-1.0); }

}  // namespace oracles
