#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ads/corpus.hpp"
#include "ads/errors.hpp"
#include "ads/parallel.hpp"
#include "ads/rng.hpp"
#include "ads/sampler.hpp"
#include "ads/text.hpp"

#include "json.hpp"

namespace ads {

inline constexpr const char* kSeparator = "[SEP]";

enum class Ordering { no_shuffle, in_shuffle, cross_shuffle };

inline const char* ordering_name(Ordering o) {
  switch (o) {
    case Ordering::no_shuffle: return "no_shuffle";
    case Ordering::in_shuffle: return "in_shuffle";
    case Ordering::cross_shuffle: return "cross_shuffle";
  }
  return "no_shuffle";
}

inline Ordering ordering_from_name(const std::string& name) {
  if (name == "no_shuffle" || name == "none") return Ordering::no_shuffle;
  if (name == "in_shuffle" || name == "in") return Ordering::in_shuffle;
  if (name == "cross_shuffle" || name == "cross") return Ordering::cross_shuffle;
  raise(Errc::io_error, "unknown ordering: " + name);
}

struct SentenceOrigin {
  std::string article_id;
  std::size_t index_in_article = 0;
};

struct AdsSample {
  std::string id;
  std::string content;  // join of sentences with single spaces
  std::string label;    // summaries joined by " [SEP] "
  int k = 1;
  std::vector<std::string> source_ids;       // group order
  std::vector<std::size_t> summary_order;    // label piece t = summary of
                                             // source_ids[summary_order[t]]
  Ordering ordering = Ordering::no_shuffle;
  std::vector<std::string> sentences;        // content split at sentence level
  std::vector<SentenceOrigin> provenance;    // one entry per sentence
};

struct AdsDataset {
  std::vector<AdsSample> samples;
  std::set<int> k_values;
  Split split = Split::train;
};

struct OrderedContent {
  std::string content;
  std::vector<std::string> sentences;
  std::vector<SentenceOrigin> provenance;
};

// Arrange the group's sentences into the sample content.
//   no_shuffle:    article blocks in group order, in-article order kept
//   in_shuffle:    article blocks in group order, each block permuted
//   cross_shuffle: one permutation over the union of all sentences
inline OrderedContent order_sentences(const std::vector<Article>& group_articles,
                                      Ordering strategy, std::uint64_t seed) {
  SplitMix64 rng(seed);
  OrderedContent out;

  std::vector<std::vector<Sentence>> per_article;
  per_article.reserve(group_articles.size());
  for (const Article& a : group_articles) {
    std::vector<Sentence> sentences = segment_article(a);
    if (sentences.empty()) {
      raise(Errc::empty_article, "article has no sentences: " + a.id);
    }
    per_article.push_back(std::move(sentences));
  }

  std::vector<Sentence> ordered;
  switch (strategy) {
    case Ordering::no_shuffle:
      for (auto& block : per_article) {
        for (auto& s : block) ordered.push_back(std::move(s));
      }
      break;
    case Ordering::in_shuffle:
      for (auto& block : per_article) {
        rng.shuffle(block);
        for (auto& s : block) ordered.push_back(std::move(s));
      }
      break;
    case Ordering::cross_shuffle:
      for (auto& block : per_article) {
        for (auto& s : block) ordered.push_back(std::move(s));
      }
      rng.shuffle(ordered);
      break;
  }

  out.sentences.reserve(ordered.size());
  out.provenance.reserve(ordered.size());
  for (Sentence& s : ordered) {
    out.provenance.push_back(SentenceOrigin{s.source_article, s.index_in_article});
    out.sentences.push_back(std::move(s.text));
  }
  out.content = join(out.sentences, " ");
  return out;
}

struct ConcatenatedLabel {
  std::string label;
  std::vector<std::size_t> summary_order;
};

// Summaries in a seeded random order, joined by " [SEP] ".
inline ConcatenatedLabel concat_summaries(
    const std::vector<Article>& group_articles, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ConcatenatedLabel out;
  out.summary_order = rng.permutation(group_articles.size());
  std::vector<std::string> pieces;
  pieces.reserve(group_articles.size());
  for (std::size_t idx : out.summary_order) {
    pieces.push_back(group_articles[idx].summary);
  }
  out.label = join(pieces, std::string(" ") + kSeparator + " ");
  return out;
}

struct SynthConfig {
  int k = 2;
  Selection selection = Selection::random;
  Ordering ordering = Ordering::cross_shuffle;
  std::uint64_t seed = 0;
  // Required for min_similarity selection.
  std::shared_ptr<const EmbeddingProvider> embedder;
  SetDistance aggregation = SetDistance::min_distance;
  int jobs = 0;  // 0: hardware concurrency
};

inline AdsSample synthesize_sample(const std::vector<Article>& group_articles,
                                   Ordering ordering, std::uint64_t sample_seed,
                                   std::string id) {
  // Content order and label order are drawn from independent streams so the
  // label permutation stays random under every ordering strategy.
  OrderedContent content =
      order_sentences(group_articles, ordering, mix_seed(sample_seed, 1));
  ConcatenatedLabel label =
      concat_summaries(group_articles, mix_seed(sample_seed, 2));

  AdsSample sample;
  sample.id = std::move(id);
  sample.content = std::move(content.content);
  sample.label = std::move(label.label);
  sample.k = static_cast<int>(group_articles.size());
  sample.source_ids.reserve(group_articles.size());
  for (const Article& a : group_articles) sample.source_ids.push_back(a.id);
  sample.summary_order = std::move(label.summary_order);
  sample.ordering = ordering;
  sample.sentences = std::move(content.sentences);
  sample.provenance = std::move(content.provenance);
  return sample;
}

inline AdsDataset synthesize_from_partition(const Corpus& corpus,
                                            const Partition& partition,
                                            const SynthConfig& config) {
  std::unordered_map<std::string, const Article*> by_id;
  by_id.reserve(corpus.size());
  for (const Article& a : corpus.articles) by_id[a.id] = &a;

  AdsDataset dataset;
  dataset.split = corpus.split;
  dataset.k_values.insert(config.k);
  dataset.samples.resize(partition.groups.size());

  // Per-sample seeds are derived from (global seed, group index), so groups
  // can be built in parallel with output identical to a sequential run.
  parallel_for(partition.groups.size(), config.jobs, [&](std::size_t g) {
    const SampleGroup& group = partition.groups[g];
    std::vector<Article> articles;
    articles.reserve(group.article_ids.size());
    for (const std::string& id : group.article_ids) {
      articles.push_back(*by_id.at(id));
    }
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "k%d-%06zu", config.k, g);
    dataset.samples[g] = synthesize_sample(
        articles, config.ordering, mix_seed(config.seed, g), id_buf);
  });
  return dataset;
}

inline AdsDataset synthesize_dataset(const Corpus& corpus,
                                     const SynthConfig& config) {
  Partition partition;
  if (config.selection == Selection::random) {
    partition = random_partition(corpus, config.k, config.seed);
  } else {
    if (!config.embedder) {
      raise(Errc::embedding_failure,
            "min_similarity selection needs an embedding provider");
    }
    partition = min_similarity_partition(corpus, config.k, *config.embedder,
                                         config.aggregation);
  }
  return synthesize_from_partition(corpus, partition, config);
}

// Union of several datasets with a seeded global shuffle of sample order.
// Ids must be disjoint unless re-iding is on.
inline AdsDataset merge_variable(const std::vector<AdsDataset>& datasets,
                                 std::uint64_t seed, bool reassign_ids = false) {
  AdsDataset merged;
  if (!datasets.empty()) merged.split = datasets.front().split;
  std::unordered_set<std::string> seen;
  for (const AdsDataset& d : datasets) {
    for (const AdsSample& s : d.samples) {
      if (!reassign_ids && !seen.insert(s.id).second) {
        raise(Errc::id_collision, "sample id collision on merge: " + s.id);
      }
      merged.samples.push_back(s);
      merged.k_values.insert(s.k);
    }
  }
  SplitMix64 rng(seed);
  rng.shuffle(merged.samples);
  if (reassign_ids) {
    for (std::size_t i = 0; i < merged.samples.size(); ++i) {
      char id_buf[32];
      std::snprintf(id_buf, sizeof(id_buf), "s%06zu", i);
      merged.samples[i].id = id_buf;
    }
  }
  return merged;
}

struct DatasetStats {
  std::size_t count = 0;
  std::map<int, std::size_t> count_by_k;
  MeanStd content_tokens;
  MeanStd label_tokens;
};

inline DatasetStats dataset_stats(const AdsDataset& dataset) {
  if (dataset.samples.empty()) {
    raise(Errc::empty_dataset, "dataset_stats: empty dataset");
  }
  std::vector<double> content_lengths, label_lengths;
  content_lengths.reserve(dataset.samples.size());
  label_lengths.reserve(dataset.samples.size());
  DatasetStats stats;
  for (const AdsSample& s : dataset.samples) {
    content_lengths.push_back(
        static_cast<double>(count_whitespace_tokens(s.content)));
    label_lengths.push_back(
        static_cast<double>(count_whitespace_tokens(s.label)));
    ++stats.count_by_k[s.k];
  }
  stats.count = dataset.samples.size();
  stats.content_tokens = mean_std(content_lengths);
  stats.label_tokens = mean_std(label_lengths);
  return stats;
}

// Dataset JSONL. "sentences" and "sentence_provenance" carry the per-sentence
// provenance that clustering analysis needs; content is always their join.
inline nlohmann::ordered_json sample_to_json(const AdsSample& s) {
  nlohmann::ordered_json obj;
  obj["id"] = s.id;
  obj["content"] = s.content;
  obj["label"] = s.label;
  obj["k"] = s.k;
  obj["source_ids"] = s.source_ids;
  obj["summary_order"] = s.summary_order;
  obj["ordering"] = ordering_name(s.ordering);
  obj["sentences"] = s.sentences;
  auto prov = nlohmann::ordered_json::array();
  for (const SentenceOrigin& o : s.provenance) {
    prov.push_back(nlohmann::ordered_json::array(
        {o.article_id, o.index_in_article}));
  }
  obj["sentence_provenance"] = std::move(prov);
  return obj;
}

inline void save_dataset(const AdsDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write dataset file: " + path);
  for (const AdsSample& s : dataset.samples) {
    out << sample_to_json(s).dump() << '\n';
  }
}

inline AdsDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open dataset file: " + path);
  AdsDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      raise(Errc::malformed_line,
            "malformed dataset line " + std::to_string(line_no));
    }
    AdsSample s;
    try {
      s.id = obj.at("id").get<std::string>();
      s.content = obj.at("content").get<std::string>();
      s.label = obj.at("label").get<std::string>();
      s.k = obj.at("k").get<int>();
      s.source_ids = obj.at("source_ids").get<std::vector<std::string>>();
      s.summary_order =
          obj.at("summary_order").get<std::vector<std::size_t>>();
      s.ordering = ordering_from_name(obj.at("ordering").get<std::string>());
      if (obj.contains("sentences")) {
        s.sentences = obj["sentences"].get<std::vector<std::string>>();
      } else {
        s.sentences = segment_sentences(s.content);
      }
      if (obj.contains("sentence_provenance")) {
        for (const auto& entry : obj["sentence_provenance"]) {
          s.provenance.push_back(SentenceOrigin{
              entry.at(0).get<std::string>(), entry.at(1).get<std::size_t>()});
        }
      }
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::malformed_line, "malformed dataset line " +
                                      std::to_string(line_no) + ": " +
                                      e.what());
    }
    if (!seen.insert(s.id).second) {
      raise(Errc::duplicate_id, "duplicate sample id: " + s.id);
    }
    dataset.k_values.insert(s.k);
    dataset.samples.push_back(std::move(s));
  }
  return dataset;
}

}  // namespace ads
