#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ads/corpus.hpp"
#include "ads/errors.hpp"
#include "ads/evaluator.hpp"
#include "ads/parallel.hpp"
#include "ads/similarity.hpp"
#include "ads/synthesizer.hpp"

namespace ads {

// label[i] = argmax over summaries of scorer(sentence_i, summary_j);
// the lowest index wins ties, empty summaries score 0 against everything.
inline std::vector<int> assign_sentences(
    const std::vector<std::string>& sentences, const SummarySet& summaries,
    const SimilarityScorer& scorer) {
  if (summaries.size() == 0) {
    raise(Errc::no_summaries, "assign_sentences: no summaries");
  }
  std::vector<int> labels(sentences.size(), 0);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    double best = -1.0;
    int best_j = 0;
    for (std::size_t j = 0; j < summaries.size(); ++j) {
      const std::string& summary = summaries.summaries[j];
      const double s =
          trim(summary).empty() ? 0.0 : scorer.score(sentences[i], summary);
      if (s > best) {
        best = s;
        best_j = static_cast<int>(j);
      }
    }
    labels[i] = best_j;
  }
  return labels;
}

struct MappingResult {
  // (predicted label, truth label) pairs; predicted labels left out map to
  // nothing.
  std::vector<std::pair<int, int>> mapping;
  double macro_f1 = 0.0;
};

namespace mapping_detail {

inline std::vector<int> distinct_sorted(const std::vector<int>& labels) {
  std::vector<int> out(labels);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mapping_detail

// Exhaustively search injective mappings from predicted clusters onto truth
// classes (unmatched side padded with "no class") and return the mapping with
// the highest macro-F1 over truth classes. Macro-F1 averages per-truth-class
// F1; a truth class that receives no correct prediction contributes 0.
// Deterministic: mappings are enumerated in lexicographic order and the first
// maximum is kept.
inline MappingResult best_mapping_f1(const std::vector<int>& pred,
                                     const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    raise(Errc::length_mismatch, "best_mapping_f1: label lists differ in size");
  }
  const std::vector<int> pred_classes = mapping_detail::distinct_sorted(pred);
  const std::vector<int> truth_classes = mapping_detail::distinct_sorted(truth);
  if (pred_classes.size() > 8 || truth_classes.size() > 8) {
    raise(Errc::too_many_clusters,
          "best_mapping_f1: more than 8 distinct labels");
  }
  MappingResult result;
  if (pred.empty() || pred_classes.empty()) return result;

  const std::size_t n_pred = pred_classes.size();
  const std::size_t n_truth = truth_classes.size();

  // Confusion counts over class indices.
  std::unordered_map<int, std::size_t> pred_index, truth_index;
  for (std::size_t i = 0; i < n_pred; ++i) pred_index[pred_classes[i]] = i;
  for (std::size_t i = 0; i < n_truth; ++i) truth_index[truth_classes[i]] = i;
  std::vector<std::vector<std::size_t>> confusion(
      n_pred, std::vector<std::size_t>(n_truth, 0));
  std::vector<std::size_t> pred_total(n_pred, 0), truth_total(n_truth, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::size_t p = pred_index.at(pred[i]);
    const std::size_t t = truth_index.at(truth[i]);
    ++confusion[p][t];
    ++pred_total[p];
    ++truth_total[t];
  }

  // assigned_pred[t]: which predicted class index maps onto truth class t,
  // or npos when none does.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  auto macro_f1_of = [&](const std::vector<std::size_t>& assigned_pred) {
    double sum = 0.0;
    for (std::size_t t = 0; t < n_truth; ++t) {
      const std::size_t p = assigned_pred[t];
      if (p == npos) continue;  // class gets F1 = 0
      const std::size_t tp = confusion[p][t];
      const std::size_t fp = pred_total[p] - tp;
      const std::size_t fn = truth_total[t] - tp;
      const std::size_t denom = 2 * tp + fp + fn;
      if (denom > 0) {
        sum += 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
      }
    }
    return sum / static_cast<double>(n_truth);
  };

  // Enumerate maximal injective maps: permutations of the smaller side drawn
  // from the larger side, in lexicographic order.
  double best = -1.0;
  std::vector<std::size_t> best_assigned;

  if (n_pred <= n_truth) {
    // choose an ordered selection of truth classes for the predicted classes
    std::vector<std::size_t> selection(n_pred);
    std::vector<char> used(n_truth, 0);
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
      if (depth == n_pred) {
        std::vector<std::size_t> assigned(n_truth, npos);
        for (std::size_t p = 0; p < n_pred; ++p) assigned[selection[p]] = p;
        const double f1 = macro_f1_of(assigned);
        if (f1 > best) {
          best = f1;
          best_assigned = assigned;
        }
        return;
      }
      for (std::size_t t = 0; t < n_truth; ++t) {
        if (used[t]) continue;
        used[t] = 1;
        selection[depth] = t;
        self(self, depth + 1);
        used[t] = 0;
      }
    };
    recurse(recurse, 0);
  } else {
    // choose an ordered selection of predicted classes for the truth classes
    std::vector<std::size_t> assigned(n_truth, npos);
    std::vector<char> used(n_pred, 0);
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
      if (depth == n_truth) {
        const double f1 = macro_f1_of(assigned);
        if (f1 > best) {
          best = f1;
          best_assigned = assigned;
        }
        return;
      }
      for (std::size_t p = 0; p < n_pred; ++p) {
        if (used[p]) continue;
        used[p] = 1;
        assigned[depth] = p;
        self(self, depth + 1);
        used[p] = 0;
      }
    };
    recurse(recurse, 0);
  }

  result.macro_f1 = best;
  for (std::size_t t = 0; t < n_truth; ++t) {
    if (best_assigned[t] != npos) {
      result.mapping.emplace_back(pred_classes[best_assigned[t]],
                                  truth_classes[t]);
    }
  }
  std::sort(result.mapping.begin(), result.mapping.end());
  return result;
}

struct ClusterSampleRecord {
  std::string id;
  std::size_t cluster_count = 0;
  double macro_f1 = 0.0;
};

struct ClusterReport {
  MeanStd cluster_count;
  MeanStd macro_f1;
  std::vector<ClusterSampleRecord> samples;
};

// Per sample: cluster count = number of non-empty generated sub-summaries (no
// count normalization), macro-F1 from sentence assignment against the
// sentence provenance, then mean/std over samples.
inline ClusterReport cluster_report(
    const AdsDataset& dataset,
    const std::unordered_map<std::string, std::string>& predictions,
    const SimilarityScorer& scorer, int jobs = 0) {
  for (const AdsSample& s : dataset.samples) {
    if (predictions.find(s.id) == predictions.end()) {
      raise(Errc::missing_prediction, "missing prediction for id: " + s.id);
    }
    if (s.provenance.size() != s.sentences.size()) {
      raise(Errc::missing_provenance,
            "sample lacks sentence provenance: " + s.id);
    }
  }

  ClusterReport report;
  report.samples.resize(dataset.samples.size());
  parallel_for(dataset.samples.size(), jobs, [&](std::size_t idx) {
    const AdsSample& sample = dataset.samples[idx];
    ClusterSampleRecord record;
    record.id = sample.id;

    const SummarySet generated = split_generated(predictions.at(sample.id));
    record.cluster_count = generated.size();
    if (generated.size() > 0 && !sample.sentences.empty()) {
      std::unordered_map<std::string, int> source_index;
      for (std::size_t i = 0; i < sample.source_ids.size(); ++i) {
        source_index[sample.source_ids[i]] = static_cast<int>(i);
      }
      std::vector<int> truth;
      truth.reserve(sample.provenance.size());
      for (const SentenceOrigin& o : sample.provenance) {
        truth.push_back(source_index.at(o.article_id));
      }
      const std::vector<int> pred =
          assign_sentences(sample.sentences, generated, scorer);
      record.macro_f1 = best_mapping_f1(pred, truth).macro_f1;
    }
    report.samples[idx] = std::move(record);
  });

  std::vector<double> counts, f1s;
  counts.reserve(report.samples.size());
  f1s.reserve(report.samples.size());
  for (const ClusterSampleRecord& r : report.samples) {
    counts.push_back(static_cast<double>(r.cluster_count));
    f1s.push_back(r.macro_f1);
  }
  report.cluster_count = mean_std(counts);
  report.macro_f1 = mean_std(f1s);
  return report;
}

}  // namespace ads
