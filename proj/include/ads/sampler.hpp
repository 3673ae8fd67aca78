#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ads/corpus.hpp"
#include "ads/errors.hpp"
#include "ads/rng.hpp"
#include "ads/similarity.hpp"

#include "json.hpp"

namespace ads {

enum class Selection { random, min_similarity };

inline const char* selection_name(Selection s) {
  return s == Selection::random ? "random" : "min_similarity";
}

struct SampleGroup {
  std::vector<std::string> article_ids;  // exactly k, no repeats
};

struct Partition {
  std::vector<SampleGroup> groups;
  std::vector<std::string> dropped_ids;
  Selection selection = Selection::random;
  std::uint64_t seed = 0;
  int k = 1;
};

inline nlohmann::ordered_json partition_to_json(const Partition& p) {
  nlohmann::ordered_json j;
  j["selection"] = selection_name(p.selection);
  j["seed"] = p.seed;
  j["k"] = p.k;
  auto groups = nlohmann::ordered_json::array();
  for (const SampleGroup& g : p.groups) groups.push_back(g.article_ids);
  j["groups"] = std::move(groups);
  j["dropped"] = p.dropped_ids;
  return j;
}

// Seeded Fisher-Yates over article indices, then consecutive chunks of k.
// The trailing remainder (corpus size mod k) is dropped.
inline Partition random_partition(const Corpus& corpus, int k,
                                  std::uint64_t seed) {
  if (k < 1) raise(Errc::invalid_k, "random_partition: k must be >= 1");
  if (static_cast<std::size_t>(k) > corpus.size()) {
    raise(Errc::k_too_large, "random_partition: k=" + std::to_string(k) +
                                 " exceeds corpus size " +
                                 std::to_string(corpus.size()));
  }
  SplitMix64 rng(seed);
  std::vector<std::size_t> order = rng.permutation(corpus.size());

  Partition partition;
  partition.selection = Selection::random;
  partition.seed = seed;
  partition.k = k;
  const std::size_t n_groups = corpus.size() / static_cast<std::size_t>(k);
  partition.groups.reserve(n_groups);
  std::size_t pos = 0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    SampleGroup group;
    group.article_ids.reserve(k);
    for (int j = 0; j < k; ++j) {
      group.article_ids.push_back(corpus.articles[order[pos++]].id);
    }
    partition.groups.push_back(std::move(group));
  }
  while (pos < order.size()) {
    partition.dropped_ids.push_back(corpus.articles[order[pos++]].id);
  }
  return partition;
}

enum class SetDistance { min_distance, mean_distance };

// Greedy diversity grouping over summary embeddings: walk the corpus in
// order, seed a group with the first unused article, then repeatedly pull in
// the unused candidate farthest (in cosine distance) from the group. With
// min_distance aggregation this is farthest-point selection: the candidate
// maximizes its distance to the *nearest* group member. Ties go to the lowest
// corpus index. A final group that cannot reach k members is dropped so that
// both selection modes obey the floor(N/k) count law.
inline Partition min_similarity_partition(
    const Corpus& corpus, int k, const EmbeddingProvider& provider,
    SetDistance aggregation = SetDistance::min_distance) {
  if (k < 1) raise(Errc::invalid_k, "min_similarity_partition: k must be >= 1");

  std::vector<std::string> summaries;
  summaries.reserve(corpus.size());
  for (const Article& a : corpus.articles) summaries.push_back(a.summary);
  std::vector<EmbeddingVector> embeddings;
  try {
    embeddings = provider.embed_batch(summaries);
  } catch (const Error& e) {
    if (e.is_service_error()) throw;
    raise(Errc::embedding_failure,
          std::string("failed to embed summaries: ") + e.what());
  }
  if (embeddings.size() != corpus.size()) {
    raise(Errc::embedding_failure, "provider returned wrong embedding count");
  }

  const std::size_t n = corpus.size();
  std::vector<char> used(n, 0);
  Partition partition;
  partition.selection = Selection::min_similarity;
  partition.seed = 0;
  partition.k = k;

  // agg[c]: running min (or sum, for the mean rule) of cosine distances from
  // candidate c to the current group's members.
  std::vector<double> agg(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = 1;
    std::vector<std::size_t> group_members{i};

    const bool use_min = aggregation == SetDistance::min_distance;
    for (std::size_t c = 0; c < n; ++c) {
      if (!used[c]) {
        agg[c] = cosine_distance(embeddings[c], embeddings[i]);
      }
    }
    while (group_members.size() < static_cast<std::size_t>(k)) {
      std::size_t best = n;
      double best_dist = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        const double d =
            use_min ? agg[c]
                    : agg[c] / static_cast<double>(group_members.size());
        if (d > best_dist) {  // strict: first (lowest) index wins ties
          best_dist = d;
          best = c;
        }
      }
      if (best == n) break;  // candidates exhausted
      used[best] = 1;
      group_members.push_back(best);
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        const double d = cosine_distance(embeddings[c], embeddings[best]);
        agg[c] = use_min ? std::min(agg[c], d) : agg[c] + d;
      }
    }

    if (group_members.size() == static_cast<std::size_t>(k)) {
      SampleGroup group;
      group.article_ids.reserve(k);
      for (std::size_t m : group_members) {
        group.article_ids.push_back(corpus.articles[m].id);
      }
      partition.groups.push_back(std::move(group));
    } else {
      for (std::size_t m : group_members) {
        partition.dropped_ids.push_back(corpus.articles[m].id);
      }
    }
  }
  return partition;
}

}  // namespace ads
