// Random-instance generators backing the property tests. Everything is
// driven by a caller-owned std::mt19937_64 so failures replay from a seed.
#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "causeway/cfir.hpp"
#include "causeway/logsource.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

/// Random lowercase word, 1..8 letters.
std::string word(Rng& rng);

/// Source text of a random project in the supported Java subset — a list of
/// (path, content) files that parse_source_subset accepts by construction.
std::vector<std::pair<std::string, std::string>> random_project(Rng& rng);

/// Proto text declaring 0..2 services with unique rpc names.
std::string random_idl(Rng& rng);

/// Parsed facts of a random project, with idl services attached.
causeway::CodeFacts random_facts(Rng& rng);

/// Random primitive templates: static words, bare and decorated wildcards;
/// no two adjacent wildcard tokens; distinct (origin, line) pairs.
std::vector<causeway::LogTemplate> random_templates(Rng& rng, int count);

/// Token sequence generated FROM a template: statics verbatim, each wildcard
/// replaced by 1..3 random words.
std::vector<std::string> message_from(Rng& rng, const causeway::LogTemplate& t);

/// Unrelated random token sequence, 0..8 words.
std::vector<std::string> random_message(Rng& rng);

/// Random directed edges over nodes "n0".."n{count-1}" (self-loops excluded,
/// duplicates removed); returned as (caller, callee) pairs.
std::vector<std::pair<std::string, std::string>> random_edges(Rng& rng, int nodes,
                                                              double density);

}  // namespace gen
