#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ads/corpus.hpp"
#include "ads/errors.hpp"
#include "ads/parallel.hpp"
#include "ads/rouge.hpp"
#include "ads/similarity.hpp"
#include "ads/synthesizer.hpp"
#include "ads/text.hpp"

#include "json.hpp"

namespace ads {

struct SummarySet {
  std::vector<std::string> summaries;

  std::size_t size() const { return summaries.size(); }
};

// Split model output on the literal "[SEP]", trim each piece, drop pieces
// that are empty after trimming.
inline SummarySet split_generated(std::string_view output_text) {
  SummarySet set;
  const std::string sep = kSeparator;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = output_text.find(sep, start);
    const std::string_view piece =
        pos == std::string_view::npos
            ? output_text.substr(start)
            : output_text.substr(start, pos - start);
    std::string trimmed = trim(piece);
    if (!trimmed.empty()) set.summaries.push_back(std::move(trimmed));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return set;
}

enum class NormalizeMethod { closest, longest, shortest };

inline NormalizeMethod normalize_method_from_name(const std::string& name) {
  if (name == "closest") return NormalizeMethod::closest;
  if (name == "longest") return NormalizeMethod::longest;
  if (name == "shortest") return NormalizeMethod::shortest;
  raise(Errc::io_error, "unknown normalize method: " + name);
}

// Force the generated set to exactly k entries:
//   more than k + closest:  repeatedly merge the most similar pair, the
//                           merged text sits at the earlier position
//   more than k + longest/shortest: keep the top k by character length
//   fewer than k:           pad with empty summaries
inline SummarySet normalize_count(SummarySet generated, int k,
                                  NormalizeMethod method,
                                  const SimilarityScorer& scorer) {
  if (k < 1) raise(Errc::invalid_k, "normalize_count: k must be >= 1");
  auto& items = generated.summaries;

  if (items.size() > static_cast<std::size_t>(k)) {
    switch (method) {
      case NormalizeMethod::closest: {
        while (items.size() > static_cast<std::size_t>(k)) {
          std::size_t best_i = 0, best_j = 1;
          double best_score = -1.0;
          for (std::size_t i = 0; i < items.size(); ++i) {
            for (std::size_t j = i + 1; j < items.size(); ++j) {
              const double s = scorer.score(items[i], items[j]);
              if (s > best_score) {  // ties keep the lowest (i, j)
                best_score = s;
                best_i = i;
                best_j = j;
              }
            }
          }
          items[best_i] += " " + items[best_j];
          items.erase(items.begin() + static_cast<std::ptrdiff_t>(best_j));
        }
        break;
      }
      case NormalizeMethod::longest:
      case NormalizeMethod::shortest: {
        std::vector<std::size_t> idx(items.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        const bool longest = method == NormalizeMethod::longest;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) {
                           if (items[a].size() != items[b].size()) {
                             return longest ? items[a].size() > items[b].size()
                                            : items[a].size() < items[b].size();
                           }
                           return a < b;
                         });
        idx.resize(static_cast<std::size_t>(k));
        std::sort(idx.begin(), idx.end());  // keep original order
        std::vector<std::string> kept;
        kept.reserve(idx.size());
        for (std::size_t i : idx) kept.push_back(std::move(items[i]));
        items = std::move(kept);
        break;
      }
    }
  }
  while (items.size() < static_cast<std::size_t>(k)) items.emplace_back();
  return generated;
}

enum class PairingMode { greedy_unique, argmax_reuse };

struct Pairing {
  // (generated index, reference index), in assignment order.
  std::vector<std::pair<std::size_t, std::size_t>> assignment;
  std::vector<RougeScores> per_pair;  // aligned with assignment
  PairingMode mode = PairingMode::greedy_unique;
};

// Pair generated summaries with references through the RougeSum affinity
// matrix. greedy_unique repeatedly takes the globally best remaining cell
// (one-to-one); argmax_reuse takes each generated row's argmax and may reuse
// references (ties there go to the first reference). greedy ties compare the
// texts themselves (generated, then reference, then indices): equal-affinity
// cells are then resolved the same way no matter how either list is ordered,
// which keeps the final score independent of summary order even when short
// texts collide on the same RougeSum value.
inline Pairing pair_summaries(const SummarySet& generated,
                              const SummarySet& references, PairingMode mode) {
  const std::size_t k = generated.size();
  if (k != references.size()) {
    raise(Errc::length_mismatch,
          "pair_summaries: " + std::to_string(k) + " generated vs " +
              std::to_string(references.size()) + " references");
  }
  Pairing pairing;
  pairing.mode = mode;
  if (k == 0) return pairing;

  std::vector<std::vector<RougeScores>> scores(k, std::vector<RougeScores>(k));
  std::vector<std::vector<double>> affinity(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      scores[i][j] = rouge_suite(generated.summaries[i], references.summaries[j]);
      affinity[i][j] = rouge_sum(scores[i][j]);
    }
  }

  if (mode == PairingMode::argmax_reuse) {
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t best_j = 0;
      for (std::size_t j = 1; j < k; ++j) {
        if (affinity[i][j] > affinity[i][best_j]) best_j = j;
      }
      pairing.assignment.emplace_back(i, best_j);
      pairing.per_pair.push_back(scores[i][best_j]);
    }
    return pairing;
  }

  std::vector<char> row_used(k, 0), col_used(k, 0);
  auto better = [&](std::size_t i, std::size_t j, double best, std::size_t bi,
                    std::size_t bj) {
    if (bi == k) return true;
    if (affinity[i][j] != best) return affinity[i][j] > best;
    const int gen_cmp =
        generated.summaries[i].compare(generated.summaries[bi]);
    if (gen_cmp != 0) return gen_cmp < 0;
    const int ref_cmp =
        references.summaries[j].compare(references.summaries[bj]);
    if (ref_cmp != 0) return ref_cmp < 0;
    if (i != bi) return i < bi;
    return j < bj;
  };
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best_i = k, best_j = k;
    double best = -1.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (col_used[j]) continue;
        if (better(i, j, best, best_i, best_j)) {
          best = affinity[i][j];
          best_i = i;
          best_j = j;
        }
      }
    }
    row_used[best_i] = 1;
    col_used[best_j] = 1;
    pairing.assignment.emplace_back(best_i, best_j);
    pairing.per_pair.push_back(scores[best_i][best_j]);
  }
  return pairing;
}

inline SummarySet parse_reference_label(const std::string& label, int k) {
  SummarySet refs = split_generated(label);
  if (refs.size() != static_cast<std::size_t>(k)) {
    raise(Errc::length_mismatch,
          "label does not parse into " + std::to_string(k) + " summaries (got " +
              std::to_string(refs.size()) + ")");
  }
  return refs;
}

// Mean of per-pair scores, component-wise.
inline RougeScores mean_scores(const std::vector<RougeScores>& xs) {
  RougeScores mean;
  if (xs.empty()) return mean;
  const double n = static_cast<double>(xs.size());
  auto add = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (const RougeScores& s : xs) {
    add(mean.rouge1, s.rouge1);
    add(mean.rouge2, s.rouge2);
    add(mean.rougeL, s.rougeL);
    add(mean.rougeLsum, s.rougeLsum);
  }
  auto div = [n](RougeScore& s) {
    s.precision /= n;
    s.recall /= n;
    s.f1 /= n;
  };
  div(mean.rouge1);
  div(mean.rouge2);
  div(mean.rougeL);
  div(mean.rougeLsum);
  return mean;
}

// Full per-sample protocol: split the output on [SEP], normalize the count to
// k, pair against the label's summaries, average over the k pairs. The
// average runs in reference order, so reordering the generated sub-summaries
// cannot even perturb floating-point rounding.
inline RougeScores evaluate_sample(const std::string& label,
                                   const std::string& model_output, int k,
                                   NormalizeMethod method, PairingMode mode,
                                   const SimilarityScorer& scorer) {
  const SummarySet references = parse_reference_label(label, k);
  SummarySet generated =
      normalize_count(split_generated(model_output), k, method, scorer);
  const Pairing pairing = pair_summaries(generated, references, mode);
  std::vector<std::size_t> order(pairing.assignment.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairing.assignment[a].second < pairing.assignment[b].second;
  });
  std::vector<RougeScores> by_reference;
  by_reference.reserve(order.size());
  for (std::size_t i : order) by_reference.push_back(pairing.per_pair[i]);
  return mean_scores(by_reference);
}

// Predictions JSONL: {"id": ..., "generated": ...} per line.
inline std::unordered_map<std::string, std::string> load_predictions(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open predictions file: " + path);
  std::unordered_map<std::string, std::string> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
        !obj["id"].is_string() || !obj.contains("generated") ||
        !obj["generated"].is_string()) {
      raise(Errc::malformed_line,
            "malformed predictions line " + std::to_string(line_no));
    }
    preds[obj["id"].get<std::string>()] = obj["generated"].get<std::string>();
  }
  return preds;
}

struct EvalConfig {
  NormalizeMethod normalize = NormalizeMethod::closest;
  PairingMode pairing = PairingMode::greedy_unique;
  int k_override = 0;  // 0: use each sample's own k
  int jobs = 0;
};

struct SeedRun {
  std::int64_t seed = 0;
  std::unordered_map<std::string, std::string> predictions;
};

struct MetricStat {
  double mean = 0.0;
  double stddev = 0.0;  // population, over per-seed means
};

struct PerSeedResult {
  std::int64_t seed = 0;
  RougeScores mean;
  std::vector<RougeScores> per_sample;  // dataset order
};

struct EvalReport {
  std::vector<PerSeedResult> per_seed;
  MetricStat rouge1, rouge2, rougeL, rougeLsum;  // over per-seed mean f1
};

inline EvalReport evaluate_dataset(const AdsDataset& dataset,
                                   const std::vector<SeedRun>& runs,
                                   const EvalConfig& config,
                                   const SimilarityScorer& scorer) {
  if (dataset.samples.empty()) {
    raise(Errc::empty_dataset, "evaluate_dataset: empty dataset");
  }
  EvalReport report;
  for (const SeedRun& run : runs) {
    PerSeedResult result;
    result.seed = run.seed;
    result.per_sample.resize(dataset.samples.size());
    // Fail fast on coverage before burning time on scoring.
    for (const AdsSample& s : dataset.samples) {
      if (run.predictions.find(s.id) == run.predictions.end()) {
        raise(Errc::missing_prediction, "missing prediction for id: " + s.id);
      }
    }
    parallel_for(dataset.samples.size(), config.jobs, [&](std::size_t i) {
      const AdsSample& s = dataset.samples[i];
      const int k = config.k_override > 0 ? config.k_override : s.k;
      result.per_sample[i] =
          evaluate_sample(s.label, run.predictions.at(s.id), k,
                          config.normalize, config.pairing, scorer);
    });
    result.mean = mean_scores(result.per_sample);
    report.per_seed.push_back(std::move(result));
  }

  auto stat_of = [&](auto pick) {
    std::vector<double> means;
    means.reserve(report.per_seed.size());
    for (const PerSeedResult& r : report.per_seed) means.push_back(pick(r.mean));
    const MeanStd ms = mean_std(means);
    return MetricStat{ms.mean, ms.stddev};
  };
  report.rouge1 = stat_of([](const RougeScores& s) { return s.rouge1.f1; });
  report.rouge2 = stat_of([](const RougeScores& s) { return s.rouge2.f1; });
  report.rougeL = stat_of([](const RougeScores& s) { return s.rougeL.f1; });
  report.rougeLsum = stat_of([](const RougeScores& s) { return s.rougeLsum.f1; });
  return report;
}

}  // namespace ads
