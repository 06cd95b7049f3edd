#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "causeway/inference.hpp"
#include "causeway/issue.hpp"

namespace causeway {

/// Metric tokenizer: maximal alphanumeric runs, plus each punctuation
/// character as its own token. Case preserved; whitespace dropped.
std::vector<std::string> metric_tokens(const std::string& text);

/// Component normalization shared by the localization metrics: lowercase,
/// trim, collapse inner whitespace.
std::string normalize_component(const std::string& name);

/// 1 iff the predicted primary set equals the ground-truth set after
/// normalization; fewer or more components score 0.
int exact_match(const Diagnosis& pred, const GroundTruth& gt);

/// 1 iff every ground-truth component appears within the first k ranked
/// components.
int top_k(const Diagnosis& pred, const GroundTruth& gt, int k);

/// Corpus-of-one BLEU, n-gram orders 1..4, uniform weights, brevity penalty
/// e^(1-r/c) for short candidates, add-one smoothing on every order
/// (p_n = (m_n+1)/(t_n+1)). Empty candidate scores 0.
double bleu4(const std::string& candidate, const std::string& reference);

/// ROUGE-1 F1 with clipped multiset unigram overlap; 0 when either side is
/// empty.
double rouge1_f(const std::string& candidate, const std::string& reference);

struct IssueScore {
    std::string id;
    std::string system;
    int exact_match = 0;
    int top3 = 0;
    int top5 = 0;
    double bleu4 = 0.0;
    double rouge1_f = 0.0;
    bool operator==(const IssueScore&) const = default;
};

struct ScoreCard {
    struct Aggregate {
        int count = 0;
        double exact_match = 0.0;
        double top3 = 0.0;
        double top5 = 0.0;
        double bleu4 = 0.0;
        double rouge1_f = 0.0;
        bool operator==(const Aggregate&) const = default;
    };
    std::vector<IssueScore> per_issue;  // ordered by (system, id)
    std::map<std::string, Aggregate> per_system;
    Aggregate overall;
};

/// Scores every diagnosis against its ground truth; throws
/// MissingGroundTruth for a diagnosis id without a label. id_to_system maps
/// issue ids to their system for the per-system aggregates; missing ids
/// aggregate under "(unknown)". jobs > 1 scores issues in parallel with a
/// deterministic reduction.
ScoreCard evaluate_corpus(const std::map<std::string, Diagnosis>& diagnoses,
                          const std::map<std::string, GroundTruth>& truths,
                          const std::map<std::string, std::string>& id_to_system,
                          int jobs = 1);

/// Machine form: stable key order, full precision, reserved null fields
/// (meteor, semantics) for external scorers, metadata recording the BLEU
/// smoothing variant.
nlohmann::ordered_json scorecard_to_json(const ScoreCard& card);

/// Human table; values rounded to 3 decimals here only.
std::string render_scorecard_table(const ScoreCard& card);

}  // namespace causeway
