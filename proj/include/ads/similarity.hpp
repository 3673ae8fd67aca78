#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ads/errors.hpp"
#include "ads/text.hpp"

namespace ads {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }

  bool is_zero() const {
    for (double v : values) {
      if (v != 0.0) return false;
    }
    return true;
  }
};

inline double cosine_similarity(const EmbeddingVector& a,
                                const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    raise(Errc::dimension_mismatch,
          "cosine_similarity: dim " + std::to_string(a.dim()) + " vs " +
              std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;  // zero vector: similarity 0, not NaN
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double cosine_distance(const EmbeddingVector& a,
                              const EmbeddingVector& b) {
  return 1.0 - cosine_similarity(a, b);
}

// F1 over the clipped multiset intersection of lowercased alphanumeric
// unigrams. 0 when either side has no tokens.
inline double token_overlap_f1(std::string_view a, std::string_view b) {
  const std::vector<std::string> ta = alnum_tokens(a);
  const std::vector<std::string> tb = alnum_tokens(b);
  if (ta.empty() || tb.empty()) return 0.0;
  std::unordered_map<std::string, int> counts;
  for (const std::string& t : ta) ++counts[t];
  std::size_t overlap = 0;
  for (const std::string& t : tb) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  const double p = static_cast<double>(overlap) / static_cast<double>(tb.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(ta.size());
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual EmbeddingVector embed(const std::string& text) const = 0;

  virtual std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(embed(t));
    return out;
  }
};

// Deterministic local embedder: L2-normalized TF-IDF with
// idf = ln((1+N)/(1+df)) + 1 over lowercased alphanumeric tokens.
// Out-of-vocabulary-only input embeds to the zero vector.
class TfidfProvider : public EmbeddingProvider {
 public:
  static TfidfProvider fit(const std::vector<std::string>& texts) {
    bool any_nonempty = false;
    for (const std::string& t : texts) {
      if (!trim(t).empty()) any_nonempty = true;
    }
    if (texts.empty() || !any_nonempty) {
      raise(Errc::empty_input, "fit_tfidf: no non-empty texts");
    }

    TfidfProvider provider;
    std::map<std::string, std::size_t> document_freq;  // ordered => stable ids
    for (const std::string& text : texts) {
      std::vector<std::string> tokens = alnum_tokens(text);
      std::sort(tokens.begin(), tokens.end());
      tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
      for (const std::string& t : tokens) ++document_freq[t];
    }
    const double n_docs = static_cast<double>(texts.size());
    provider.idf_.reserve(document_freq.size());
    std::size_t index = 0;
    for (const auto& [token, df] : document_freq) {
      provider.vocab_.emplace(token, index++);
      provider.idf_.push_back(
          std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df))) + 1.0);
    }
    return provider;
  }

  EmbeddingVector embed(const std::string& text) const override {
    EmbeddingVector v;
    v.values.assign(idf_.size(), 0.0);
    for (const std::string& t : alnum_tokens(text)) {
      auto it = vocab_.find(t);
      if (it != vocab_.end()) v.values[it->second] += idf_[it->second];
    }
    double norm = 0.0;
    for (double x : v.values) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v.values) x /= norm;
    }
    return v;
  }

  std::size_t vocabulary_size() const { return vocab_.size(); }

 private:
  TfidfProvider() = default;
  std::unordered_map<std::string, std::size_t> vocab_;
  std::vector<double> idf_;
};

enum class ScorerKind { token_overlap_f1, tfidf_cosine, remote_embedding_cosine };

// Pairwise text similarity used for "closest" merging and sentence-to-summary
// assignment. All implementations are symmetric with score(a, a) = 1 for
// non-empty a.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double score(const std::string& a, const std::string& b) const = 0;
  virtual ScorerKind kind() const = 0;
};

class TokenOverlapScorer : public SimilarityScorer {
 public:
  double score(const std::string& a, const std::string& b) const override {
    return token_overlap_f1(a, b);
  }
  ScorerKind kind() const override { return ScorerKind::token_overlap_f1; }
};

class EmbeddingCosineScorer : public SimilarityScorer {
 public:
  EmbeddingCosineScorer(std::shared_ptr<const EmbeddingProvider> provider,
                        ScorerKind kind)
      : provider_(std::move(provider)), kind_(kind) {}

  double score(const std::string& a, const std::string& b) const override {
    return cosine_similarity(provider_->embed(a), provider_->embed(b));
  }
  ScorerKind kind() const override { return kind_; }

 private:
  std::shared_ptr<const EmbeddingProvider> provider_;
  ScorerKind kind_;
};

}  // namespace ads
