#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ads/text.hpp"

namespace ads {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RougeScores {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  RougeScore rougeLsum;
};

// Lowercase, replace every non-alphanumeric byte with a space, split.
inline std::vector<std::string> rouge_tokenize(std::string_view text) {
  return alnum_tokens(text);
}

namespace rouge_detail {

inline RougeScore from_counts(std::size_t matches, std::size_t cand_total,
                              std::size_t ref_total) {
  RougeScore s;
  if (cand_total == 0 || ref_total == 0) return s;
  s.precision = static_cast<double>(matches) / static_cast<double>(cand_total);
  s.recall = static_cast<double>(matches) / static_cast<double>(ref_total);
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

// n-grams keyed by their joined form; \x1f cannot occur in tokens.
inline std::unordered_map<std::string, int> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key.push_back('\x1f');
      key.append(tokens[i + j]);
    }
    ++counts[key];
  }
  return counts;
}

inline std::vector<std::vector<int>> lcs_table(
    const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::vector<int>> table(m + 1, std::vector<int>(n + 1, 0));
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (a[i - 1] == b[j - 1]) {
        table[i][j] = table[i - 1][j - 1] + 1;
      } else {
        table[i][j] = std::max(table[i - 1][j], table[i][j - 1]);
      }
    }
  }
  return table;
}

inline int lcs_length(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // two-row DP; only the length is needed
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Indices in `ref` that belong to one LCS of (ref, cand). The backtrack is
// pinned (take on equal tokens; on table ties walk the ref side) so that the
// union over candidate sentences is well defined.
inline std::vector<std::size_t> lcs_ref_indices(
    const std::vector<std::string>& ref, const std::vector<std::string>& cand) {
  std::vector<std::size_t> indices;
  if (ref.empty() || cand.empty()) return indices;
  const auto table = lcs_table(ref, cand);
  std::size_t i = ref.size();
  std::size_t j = cand.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      indices.push_back(i - 1);
      --i;
      --j;
    } else if (table[i][j - 1] > table[i - 1][j]) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(indices.begin(), indices.end());
  return indices;
}

inline std::vector<std::vector<std::string>> tokenized_lines(
    std::string_view text) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& line : split_lines(text)) {
    std::vector<std::string> tokens = rouge_tokenize(line);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace rouge_detail

// Clipped n-gram overlap; precision over candidate n-grams, recall over
// reference n-grams.
inline RougeScore rouge_n(std::string_view candidate, std::string_view reference,
                          int n) {
  const auto cand_tokens = rouge_tokenize(candidate);
  const auto ref_tokens = rouge_tokenize(reference);
  const auto cand_ngrams = rouge_detail::ngram_counts(cand_tokens, n);
  const auto ref_ngrams = rouge_detail::ngram_counts(ref_tokens, n);

  std::size_t cand_total = 0, ref_total = 0, matches = 0;
  for (const auto& [k, c] : cand_ngrams) cand_total += c;
  for (const auto& [k, c] : ref_ngrams) ref_total += c;
  for (const auto& [key, ref_count] : ref_ngrams) {
    auto it = cand_ngrams.find(key);
    if (it != cand_ngrams.end()) {
      matches += static_cast<std::size_t>(std::min(ref_count, it->second));
    }
  }
  return rouge_detail::from_counts(matches, cand_total, ref_total);
}

// Token-sequence LCS; newlines are ordinary whitespace here.
inline RougeScore rouge_l(std::string_view candidate,
                          std::string_view reference) {
  const auto cand_tokens = rouge_tokenize(candidate);
  const auto ref_tokens = rouge_tokenize(reference);
  const int lcs = rouge_detail::lcs_length(cand_tokens, ref_tokens);
  return rouge_detail::from_counts(static_cast<std::size_t>(lcs),
                                   cand_tokens.size(), ref_tokens.size());
}

// Summary-level LCS: newlines delimit sentences; every reference sentence
// collects the union of its LCS matches against all candidate sentences, and
// matched tokens are credited at most as often as they occur on each side.
inline RougeScore rouge_l_sum(std::string_view candidate,
                              std::string_view reference) {
  const auto cand_lines = rouge_detail::tokenized_lines(candidate);
  const auto ref_lines = rouge_detail::tokenized_lines(reference);

  std::size_t cand_total = 0, ref_total = 0;
  std::unordered_map<std::string, int> cand_budget, ref_budget;
  for (const auto& line : cand_lines) {
    cand_total += line.size();
    for (const auto& t : line) ++cand_budget[t];
  }
  for (const auto& line : ref_lines) {
    ref_total += line.size();
    for (const auto& t : line) ++ref_budget[t];
  }
  if (cand_total == 0 || ref_total == 0) return RougeScore{};

  std::size_t hits = 0;
  for (const auto& ref_line : ref_lines) {
    std::vector<char> in_union(ref_line.size(), 0);
    for (const auto& cand_line : cand_lines) {
      for (std::size_t idx : rouge_detail::lcs_ref_indices(ref_line, cand_line)) {
        in_union[idx] = 1;
      }
    }
    for (std::size_t i = 0; i < ref_line.size(); ++i) {
      if (!in_union[i]) continue;
      auto rit = ref_budget.find(ref_line[i]);
      auto cit = cand_budget.find(ref_line[i]);
      if (rit != ref_budget.end() && rit->second > 0 &&
          cit != cand_budget.end() && cit->second > 0) {
        --rit->second;
        --cit->second;
        ++hits;
      }
    }
  }
  return rouge_detail::from_counts(hits, cand_total, ref_total);
}

inline RougeScores rouge_suite(std::string_view candidate,
                               std::string_view reference) {
  RougeScores s;
  s.rouge1 = rouge_n(candidate, reference, 1);
  s.rouge2 = rouge_n(candidate, reference, 2);
  s.rougeL = rouge_l(candidate, reference);
  s.rougeLsum = rouge_l_sum(candidate, reference);
  return s;
}

// Pairing affinity: sum of the four F1 components, in [0, 4].
inline double rouge_sum(std::string_view candidate, std::string_view reference) {
  const RougeScores s = rouge_suite(candidate, reference);
  return s.rouge1.f1 + s.rouge2.f1 + s.rougeL.f1 + s.rougeLsum.f1;
}

inline double rouge_sum(const RougeScores& s) {
  return s.rouge1.f1 + s.rouge2.f1 + s.rougeL.f1 + s.rougeLsum.f1;
}

// External reporting convention: scores x100 rounded to 2 decimals.
inline double as_percent(double fraction) {
  return std::round(fraction * 10000.0) / 100.0;
}

}  // namespace ads
