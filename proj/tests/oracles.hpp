#pragma once

// Independent reference implementations used to check the production
// algorithms. Everything here is deliberately naive: per-template anchored
// matching instead of a prefix tree, exhaustive DFS instead of the staged
// enumerator, the textbook BM25 formula, and literal counting loops. Keep
// these free of production code beyond the plain data types.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causeway/logsource.hpp"

namespace oracles {

/// True iff the template's token sequence matches the message tokens when
/// every wildcard consumes one-or-more tokens and static tokens match
/// exactly (anchored at both ends).
bool anchored_match(const causeway::LogTemplate& t,
                    const std::vector<std::string>& msg_tokens);

/// Applies anchored_match to every template and picks the winner with the
/// candidate order: most static characters first, ties by smallest
/// (origin_signature, origin_line), then rendered text, then branch path.
/// Returns the winner index and the full candidate index set.
struct MatchOracleResult {
    std::optional<std::size_t> winner;
    std::set<std::size_t> candidates;
};
MatchOracleResult match_oracle(const std::vector<causeway::LogTemplate>& templates,
                               const std::vector<std::string>& msg_tokens);

/// All acyclic node sequences from `from` to `to` using at most `max_hops`
/// edges, by plain depth-first enumeration. A sequence of one node (from ==
/// to) uses zero hops.
std::set<std::vector<std::string>> path_oracle(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::string& from, const std::string& to, int max_hops);

/// Textbook BM25 scores, one per document, for the given tokenized query.
/// IDF(t) = ln((N - df + 0.5) / (df + 0.5) + 1); each unique query term
/// counts once.
std::vector<double> bm25_oracle(const std::vector<std::string>& query_tokens,
                                const std::vector<std::vector<std::string>>& docs,
                                double k1 = 1.2, double b = 0.75);

/// Clipped multiset overlap: sum over distinct tokens of
/// min(count_in_a, count_in_b), by literal counting.
std::size_t multiset_overlap(const std::vector<std::string>& a,
                             const std::vector<std::string>& b);

// Hand-derived BLEU-4 fixture values (add-one smoothing on every order,
// uniform weights, brevity penalty e^(1 - r/c)).
//
// Disjoint vocabulary, candidate and reference both 4 tokens:
//   matches m_n = 0 for all n; candidate n-gram totals t_n = 4, 3, 2, 1.
//   p_n = (0+1)/(t_n+1) = 1/5, 1/4, 1/3, 1/2; BP = 1 (c == r).
//   BLEU = (1/5 * 1/4 * 1/3 * 1/2)^(1/4) = (1/120)^(1/4).
double bleu_disjoint_four_tokens();
//
// Candidate = first half of an 8-token reference (strict prefix):
//   every candidate n-gram occurs in the reference, so m_n = t_n and every
//   smoothed p_n = (t_n+1)/(t_n+1) = 1; BP = e^(1 - 8/4) = e^-1.
//   BLEU = e^-1.
double bleu_half_prefix();

}  // namespace oracles
