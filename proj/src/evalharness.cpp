#include "causeway/evalharness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>

namespace causeway {

std::vector<std::string> metric_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += c;
        } else {
            flush();
            if (!std::isspace(static_cast<unsigned char>(c)))
                out.push_back(std::string(1, c));
        }
    }
    flush();
    return out;
}

std::string normalize_component(const std::string& name) {
    std::string out;
    bool pending_space = false;
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

namespace {

std::set<std::string> normalized_set(const std::vector<std::string>& items) {
    std::set<std::string> out;
    for (const std::string& s : items) {
        std::string n = normalize_component(s);
        if (!n.empty()) out.insert(n);
    }
    return out;
}

}  // namespace

int exact_match(const Diagnosis& pred, const GroundTruth& gt) {
    std::set<std::string> p = normalized_set(pred.primary_components);
    std::set<std::string> g = normalized_set(gt.components);
    return (!g.empty() && p == g) ? 1 : 0;
}

int top_k(const Diagnosis& pred, const GroundTruth& gt, int k) {
    std::set<std::string> g = normalized_set(gt.components);
    if (g.empty()) return 0;
    std::set<std::string> head;
    for (size_t i = 0; i < pred.ranked_components.size() && i < static_cast<size_t>(k);
         ++i)
        head.insert(normalize_component(pred.ranked_components[i]));
    for (const std::string& c : g)
        if (!head.count(c)) return 0;
    return 1;
}

namespace {

std::map<std::vector<std::string>, int> ngram_counts(
    const std::vector<std::string>& toks, size_t n) {
    std::map<std::vector<std::string>, int> out;
    if (toks.size() < n) return out;
    for (size_t i = 0; i + n <= toks.size(); ++i)
        ++out[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                       toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return out;
}

}  // namespace

double bleu4(const std::string& candidate, const std::string& reference) {
    std::vector<std::string> cand = metric_tokens(candidate);
    std::vector<std::string> ref = metric_tokens(reference);
    if (cand.empty()) return 0.0;

    double log_sum = 0.0;
    for (size_t n = 1; n <= 4; ++n) {
        auto cc = ngram_counts(cand, n);
        auto rc = ngram_counts(ref, n);
        long matches = 0, total = 0;
        for (const auto& [gram, count] : cc) {
            total += count;
            auto it = rc.find(gram);
            if (it != rc.end()) matches += std::min(count, it->second);
        }
        // Add-one smoothing on every order keeps short texts scoreable.
        double p = (static_cast<double>(matches) + 1.0) /
                   (static_cast<double>(total) + 1.0);
        log_sum += 0.25 * std::log(p);
    }
    double c = static_cast<double>(cand.size());
    double r = static_cast<double>(ref.size());
    double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum);
}

double rouge1_f(const std::string& candidate, const std::string& reference) {
    std::vector<std::string> cand = metric_tokens(candidate);
    std::vector<std::string> ref = metric_tokens(reference);
    if (cand.empty() || ref.empty()) return 0.0;

    std::map<std::string, int> rc;
    for (const std::string& t : ref) ++rc[t];
    long overlap = 0;
    std::map<std::string, int> cc;
    for (const std::string& t : cand) ++cc[t];
    for (const auto& [tok, count] : cc) {
        auto it = rc.find(tok);
        if (it != rc.end()) overlap += std::min(count, it->second);
    }
    double p = static_cast<double>(overlap) / static_cast<double>(cand.size());
    double r = static_cast<double>(overlap) / static_cast<double>(ref.size());
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

namespace {

IssueScore score_issue(const std::string& id, const Diagnosis& d,
                       const GroundTruth& gt, const std::string& system) {
    IssueScore s;
    s.id = id;
    s.system = system;
    s.exact_match = exact_match(d, gt);
    s.top3 = top_k(d, gt, 3);
    s.top5 = top_k(d, gt, 5);
    s.bleu4 = bleu4(d.summary, gt.summary);
    s.rouge1_f = rouge1_f(d.summary, gt.summary);
    return s;
}

void accumulate(ScoreCard::Aggregate& a, const IssueScore& s) {
    ++a.count;
    a.exact_match += s.exact_match;
    a.top3 += s.top3;
    a.top5 += s.top5;
    a.bleu4 += s.bleu4;
    a.rouge1_f += s.rouge1_f;
}

void finalize(ScoreCard::Aggregate& a) {
    if (a.count == 0) return;
    double n = a.count;
    a.exact_match /= n;
    a.top3 /= n;
    a.top5 /= n;
    a.bleu4 /= n;
    a.rouge1_f /= n;
}

}  // namespace

ScoreCard evaluate_corpus(const std::map<std::string, Diagnosis>& diagnoses,
                          const std::map<std::string, GroundTruth>& truths,
                          const std::map<std::string, std::string>& id_to_system,
                          int jobs) {
    struct Task {
        std::string id;
        const Diagnosis* d;
        const GroundTruth* gt;
        std::string system;
    };
    std::vector<Task> tasks;
    for (const auto& [id, d] : diagnoses) {
        auto it = truths.find(id);
        if (it == truths.end()) throw MissingGroundTruth(id);
        auto sys = id_to_system.find(id);
        tasks.push_back({id, &d, &it->second,
                         sys == id_to_system.end() ? std::string("(unknown)")
                                                   : sys->second});
    }

    std::vector<IssueScore> scores(tasks.size());
    if (jobs > 1 && tasks.size() > 1) {
        size_t workers = std::min<size_t>(static_cast<size_t>(jobs), tasks.size());
        std::vector<std::future<void>> futs;
        for (size_t w = 0; w < workers; ++w)
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (size_t i = w; i < tasks.size(); i += workers)
                    scores[i] = score_issue(tasks[i].id, *tasks[i].d, *tasks[i].gt,
                                            tasks[i].system);
            }));
        for (auto& f : futs) f.get();
    } else {
        for (size_t i = 0; i < tasks.size(); ++i)
            scores[i] =
                score_issue(tasks[i].id, *tasks[i].d, *tasks[i].gt, tasks[i].system);
    }

    ScoreCard card;
    card.per_issue = std::move(scores);
    std::sort(card.per_issue.begin(), card.per_issue.end(),
              [](const IssueScore& a, const IssueScore& b) {
                  if (a.system != b.system) return a.system < b.system;
                  return a.id < b.id;
              });
    for (const IssueScore& s : card.per_issue) {
        accumulate(card.per_system[s.system], s);
        accumulate(card.overall, s);
    }
    for (auto& [sys, agg] : card.per_system) finalize(agg);
    finalize(card.overall);
    return card;
}

namespace {

nlohmann::ordered_json aggregate_to_json(const ScoreCard::Aggregate& a) {
    nlohmann::ordered_json o;
    o["count"] = a.count;
    o["exact_match"] = a.exact_match;
    o["top3"] = a.top3;
    o["top5"] = a.top5;
    o["bleu4"] = a.bleu4;
    o["rouge1_f"] = a.rouge1_f;
    o["meteor"] = nullptr;     // reserved for external scorers
    o["semantics"] = nullptr;  // reserved for external scorers
    return o;
}

}  // namespace

nlohmann::ordered_json scorecard_to_json(const ScoreCard& card) {
    nlohmann::ordered_json o;
    o["schema_version"] = 1;
    o["metadata"] = {
        {"bleu_smoothing", "add-one smoothing applied to all n-gram orders"},
        {"meteor", nullptr},
        {"semantics", nullptr},
    };
    o["overall"] = aggregate_to_json(card.overall);
    o["per_system"] = nlohmann::ordered_json::object();
    for (const auto& [sys, agg] : card.per_system)
        o["per_system"][sys] = aggregate_to_json(agg);
    o["per_issue"] = nlohmann::ordered_json::array();
    for (const IssueScore& s : card.per_issue) {
        nlohmann::ordered_json row;
        row["id"] = s.id;
        row["system"] = s.system;
        row["exact_match"] = s.exact_match;
        row["top3"] = s.top3;
        row["top5"] = s.top5;
        row["bleu4"] = s.bleu4;
        row["rouge1_f"] = s.rouge1_f;
        row["meteor"] = nullptr;
        row["semantics"] = nullptr;
        o["per_issue"].push_back(std::move(row));
    }
    return o;
}

std::string render_scorecard_table(const ScoreCard& card) {
    char buf[256];
    std::string out;
    out += "System        Issues  ExactMatch  Top-3   Top-5   BLEU-4  ROUGE-1\n";
    auto row = [&](const std::string& name, const ScoreCard::Aggregate& a) {
        std::snprintf(buf, sizeof(buf), "%-13s %6d  %10.3f  %6.3f  %6.3f  %6.3f  %7.3f\n",
                      name.c_str(), a.count, a.exact_match, a.top3, a.top5, a.bleu4,
                      a.rouge1_f);
        out += buf;
    };
    for (const auto& [sys, agg] : card.per_system) row(sys, agg);
    row("(overall)", card.overall);
    return out;
}

}  // namespace causeway
