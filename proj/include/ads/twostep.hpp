#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ads/corpus.hpp"
#include "ads/errors.hpp"
#include "ads/evaluator.hpp"
#include "ads/remote.hpp"
#include "ads/rng.hpp"
#include "ads/similarity.hpp"

namespace ads {

struct SentenceCluster {
  std::vector<std::size_t> member_indices;  // into the sentence list, sorted
  std::vector<std::string> member_sentences;
  EmbeddingVector centroid;  // mean of member vectors
  std::size_t total_char_length = 0;
};

enum class Clusterer { kmeans, agglomerative };
enum class ReductionMethod { least, closest, longest, shortest };

inline ReductionMethod reduction_from_name(const std::string& name) {
  if (name == "least") return ReductionMethod::least;
  if (name == "closest") return ReductionMethod::closest;
  if (name == "longest") return ReductionMethod::longest;
  if (name == "shortest") return ReductionMethod::shortest;
  raise(Errc::io_error, "unknown reduction method: " + name);
}

struct SummarizerConfig {
  enum class Kind { lead_n, remote } kind = Kind::lead_n;
  int lead_n = 3;
  RemoteConfig remote;
};

struct TwoStepConfig {
  Clusterer clusterer = Clusterer::kmeans;
  // Fixed cluster count, or nullopt for "auto": threshold clustering, which
  // is always agglomerative (k-means needs a count).
  std::optional<int> k_target;
  ReductionMethod reduction = ReductionMethod::least;
  SummarizerConfig summarizer;
  std::uint64_t seed = 0;
  // Embeds sentences; when null a TF-IDF provider is fitted on the sample's
  // own sentences.
  std::shared_ptr<const EmbeddingProvider> embedder;
  double auto_threshold = 0.5;  // cosine-distance cut for auto mode
};

namespace twostep_detail {

inline EmbeddingVector mean_vector(const std::vector<EmbeddingVector>& vectors,
                                   const std::vector<std::size_t>& members) {
  EmbeddingVector mean;
  if (members.empty()) return mean;
  mean.values.assign(vectors[members[0]].dim(), 0.0);
  for (std::size_t m : members) {
    for (std::size_t d = 0; d < mean.values.size(); ++d) {
      mean.values[d] += vectors[m].values[d];
    }
  }
  for (double& v : mean.values) v /= static_cast<double>(members.size());
  return mean;
}

inline std::vector<std::vector<std::size_t>> kmeans_labels(
    const std::vector<EmbeddingVector>& vectors, int k, std::uint64_t seed) {
  const std::size_t n = vectors.size();
  SplitMix64 rng(seed);

  // Farthest-point init: seeded first center, then maximize the minimum
  // cosine distance to the chosen set.
  std::vector<std::size_t> center_points;
  center_points.push_back(rng.next_below(n));
  std::vector<double> min_dist(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    min_dist[i] = cosine_distance(vectors[i], vectors[center_points[0]]);
  }
  while (center_points.size() < static_cast<std::size_t>(k)) {
    std::size_t farthest = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (min_dist[i] > min_dist[farthest]) farthest = i;
    }
    center_points.push_back(farthest);
    for (std::size_t i = 0; i < n; ++i) {
      min_dist[i] =
          std::min(min_dist[i], cosine_distance(vectors[i], vectors[farthest]));
    }
  }

  std::vector<EmbeddingVector> centers;
  centers.reserve(center_points.size());
  for (std::size_t c : center_points) centers.push_back(vectors[c]);

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_sim = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double sim = cosine_similarity(vectors[i], centers[c]);
        if (sim > best_sim) {
          best_sim = sim;
          best = static_cast<int>(c);
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == static_cast<int>(c)) members.push_back(i);
      }
      if (members.empty()) continue;  // keep the old center
      EmbeddingVector updated = mean_vector(vectors, members);
      for (std::size_t d = 0; d < updated.dim(); ++d) {
        const double delta = updated.values[d] - centers[c].values[d];
        movement = std::max(movement, delta * delta);
      }
      centers[c] = std::move(updated);
    }
    if (!changed || movement < 1e-6) break;
  }

  std::vector<std::vector<std::size_t>> groups(centers.size());
  for (std::size_t i = 0; i < n; ++i) {
    groups[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& g) { return g.empty(); }),
               groups.end());
  return groups;
}

// Average-linkage agglomerative clustering on cosine distance, merged with
// the Lance-Williams update. Stops at k clusters, or, in threshold mode, when
// the closest pair is farther than the cut. The lower cluster index always
// absorbs on ties.
inline std::vector<std::vector<std::size_t>> agglomerative_labels(
    const std::vector<EmbeddingVector>& vectors, std::optional<int> k,
    double threshold) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = cosine_distance(vectors[i], vectors[j]);
    }
  }
  std::vector<char> alive(n, 1);
  std::size_t alive_count = n;
  const std::size_t stop_count =
      k ? static_cast<std::size_t>(std::max(*k, 1)) : 1;

  while (alive_count > stop_count) {
    std::size_t best_i = n, best_j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (dist[i][j] < best) {
          best = dist[i][j];
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!k && best > threshold) break;
    const double size_i = static_cast<double>(clusters[best_i].size());
    const double size_j = static_cast<double>(clusters[best_j].size());
    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c] || c == best_i || c == best_j) continue;
      dist[best_i][c] = dist[c][best_i] =
          (size_i * dist[best_i][c] + size_j * dist[best_j][c]) /
          (size_i + size_j);
    }
    clusters[best_i].insert(clusters[best_i].end(), clusters[best_j].begin(),
                            clusters[best_j].end());
    alive[best_j] = 0;
    --alive_count;
  }

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) {
      std::sort(clusters[i].begin(), clusters[i].end());
      groups.push_back(std::move(clusters[i]));
    }
  }
  return groups;
}

inline SentenceCluster make_cluster(const std::vector<std::string>& sentences,
                                    const std::vector<EmbeddingVector>& vectors,
                                    std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  SentenceCluster cluster;
  cluster.centroid = mean_vector(vectors, members);
  for (std::size_t m : members) {
    cluster.member_sentences.push_back(sentences[m]);
    cluster.total_char_length += sentences[m].size();
  }
  cluster.member_indices = std::move(members);
  return cluster;
}

inline void sort_by_first_member(std::vector<SentenceCluster>& clusters) {
  std::sort(clusters.begin(), clusters.end(),
            [](const SentenceCluster& a, const SentenceCluster& b) {
              return a.member_indices.front() < b.member_indices.front();
            });
}

}  // namespace twostep_detail

inline std::vector<SentenceCluster> cluster_sentences(
    const std::vector<std::string>& sentences,
    const std::vector<EmbeddingVector>& embeddings,
    const TwoStepConfig& config) {
  if (sentences.size() != embeddings.size()) {
    raise(Errc::length_mismatch,
          "cluster_sentences: sentences and embeddings differ in size");
  }
  if (sentences.empty()) {
    raise(Errc::too_few_sentences, "cluster_sentences: no sentences");
  }
  if (config.k_target) {
    if (*config.k_target < 1) {
      raise(Errc::invalid_k, "cluster_sentences: k_target must be >= 1");
    }
    if (sentences.size() < static_cast<std::size_t>(*config.k_target)) {
      raise(Errc::too_few_sentences,
            "cluster_sentences: fewer sentences than k_target");
    }
  }

  std::vector<std::vector<std::size_t>> groups;
  if (config.k_target && config.clusterer == Clusterer::kmeans) {
    groups = twostep_detail::kmeans_labels(embeddings, *config.k_target,
                                           config.seed);
  } else {
    groups = twostep_detail::agglomerative_labels(
        embeddings, config.k_target, config.auto_threshold);
  }

  std::vector<SentenceCluster> clusters;
  clusters.reserve(groups.size());
  for (auto& g : groups) {
    clusters.push_back(
        twostep_detail::make_cluster(sentences, embeddings, std::move(g)));
  }
  twostep_detail::sort_by_first_member(clusters);
  return clusters;
}

namespace twostep_detail {

inline void merge_into(SentenceCluster& dst, const SentenceCluster& src) {
  const double w_dst = static_cast<double>(dst.member_indices.size());
  const double w_src = static_cast<double>(src.member_indices.size());
  for (std::size_t d = 0; d < dst.centroid.dim(); ++d) {
    dst.centroid.values[d] =
        (w_dst * dst.centroid.values[d] + w_src * src.centroid.values[d]) /
        (w_dst + w_src);
  }
  std::vector<std::size_t> merged_indices;
  std::vector<std::string> merged_sentences;
  std::size_t a = 0, b = 0;
  while (a < dst.member_indices.size() || b < src.member_indices.size()) {
    const bool take_a =
        b >= src.member_indices.size() ||
        (a < dst.member_indices.size() &&
         dst.member_indices[a] < src.member_indices[b]);
    if (take_a) {
      merged_indices.push_back(dst.member_indices[a]);
      merged_sentences.push_back(dst.member_sentences[a]);
      ++a;
    } else {
      merged_indices.push_back(src.member_indices[b]);
      merged_sentences.push_back(src.member_sentences[b]);
      ++b;
    }
  }
  dst.member_indices = std::move(merged_indices);
  dst.member_sentences = std::move(merged_sentences);
  dst.total_char_length += src.total_char_length;
}

}  // namespace twostep_detail

// Reduce to at most k clusters.
//   least:    merge the smallest cluster into its most similar neighbor
//   closest:  merge the two most similar clusters
//   longest/shortest: keep the top k by total character length
// Similarity between clusters is centroid cosine. Ties prefer lower indices.
inline std::vector<SentenceCluster> reduce_clusters(
    std::vector<SentenceCluster> clusters, int k, ReductionMethod method) {
  if (k < 1) raise(Errc::invalid_k, "reduce_clusters: k must be >= 1");
  if (clusters.size() <= static_cast<std::size_t>(k)) return clusters;

  switch (method) {
    case ReductionMethod::least: {
      while (clusters.size() > static_cast<std::size_t>(k)) {
        std::size_t smallest = 0;
        for (std::size_t i = 1; i < clusters.size(); ++i) {
          if (clusters[i].member_indices.size() <
              clusters[smallest].member_indices.size()) {
            smallest = i;
          }
        }
        std::size_t nearest = smallest == 0 ? 1 : 0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < clusters.size(); ++i) {
          if (i == smallest) continue;
          const double sim = cosine_similarity(clusters[i].centroid,
                                               clusters[smallest].centroid);
          if (sim > best) {
            best = sim;
            nearest = i;
          }
        }
        twostep_detail::merge_into(clusters[nearest], clusters[smallest]);
        clusters.erase(clusters.begin() +
                       static_cast<std::ptrdiff_t>(smallest));
      }
      break;
    }
    case ReductionMethod::closest: {
      while (clusters.size() > static_cast<std::size_t>(k)) {
        std::size_t best_i = 0, best_j = 1;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < clusters.size(); ++i) {
          for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            const double sim =
                cosine_similarity(clusters[i].centroid, clusters[j].centroid);
            if (sim > best) {
              best = sim;
              best_i = i;
              best_j = j;
            }
          }
        }
        twostep_detail::merge_into(clusters[best_i], clusters[best_j]);
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_j));
      }
      break;
    }
    case ReductionMethod::longest:
    case ReductionMethod::shortest: {
      std::vector<std::size_t> idx(clusters.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      const bool longest = method == ReductionMethod::longest;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a,
                                                   std::size_t b) {
        if (clusters[a].total_char_length != clusters[b].total_char_length) {
          return longest ? clusters[a].total_char_length >
                               clusters[b].total_char_length
                         : clusters[a].total_char_length <
                               clusters[b].total_char_length;
        }
        return a < b;
      });
      idx.resize(static_cast<std::size_t>(k));
      std::sort(idx.begin(), idx.end());
      std::vector<SentenceCluster> kept;
      kept.reserve(idx.size());
      for (std::size_t i : idx) kept.push_back(std::move(clusters[i]));
      clusters = std::move(kept);
      break;
    }
  }
  twostep_detail::sort_by_first_member(clusters);
  return clusters;
}

inline std::string summarize_cluster(const SentenceCluster& cluster,
                                     const SummarizerConfig& config) {
  if (cluster.member_sentences.empty()) {
    raise(Errc::too_few_sentences, "summarize_cluster: empty cluster");
  }
  if (config.kind == SummarizerConfig::Kind::lead_n) {
    const std::size_t n =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(config.lead_n, 1)),
                              cluster.member_sentences.size());
    std::vector<std::string> lead(cluster.member_sentences.begin(),
                                  cluster.member_sentences.begin() +
                                      static_cast<std::ptrdiff_t>(n));
    return join(lead, " ");
  }
  return remote_summarize(join(cluster.member_sentences, " "), config.remote);
}

inline SummarySet run_two_step(const std::vector<std::string>& sentences,
                               int k, const TwoStepConfig& config) {
  if (k < 1) raise(Errc::invalid_k, "run_two_step: k must be >= 1");
  if (sentences.empty()) {
    raise(Errc::too_few_sentences, "run_two_step: content has no sentences");
  }

  std::vector<EmbeddingVector> embeddings;
  if (config.embedder) {
    embeddings = config.embedder->embed_batch(sentences);
  } else {
    const TfidfProvider provider = TfidfProvider::fit(sentences);
    embeddings = provider.embed_batch(sentences);
  }

  TwoStepConfig clustering = config;
  if (clustering.k_target) {
    // never ask for more clusters than there are sentences
    clustering.k_target =
        std::min<int>(*clustering.k_target,
                      static_cast<int>(sentences.size()));
  }

  std::vector<SentenceCluster> clusters =
      cluster_sentences(sentences, embeddings, clustering);
  clusters = reduce_clusters(std::move(clusters), k, config.reduction);

  SummarySet out;
  out.summaries.reserve(clusters.size());
  for (const SentenceCluster& c : clusters) {
    out.summaries.push_back(summarize_cluster(c, config.summarizer));
  }
  return out;
}

inline SummarySet run_two_step(const std::string& content, int k,
                               const TwoStepConfig& config) {
  return run_two_step(segment_sentences(content), k, config);
}

}  // namespace ads
