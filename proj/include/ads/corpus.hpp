#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ads/errors.hpp"
#include "ads/text.hpp"

#include "json.hpp"

namespace ads {

struct Article {
  std::string id;
  std::string text;
  std::string summary;
};

enum class Split { train, validation, test };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

struct Corpus {
  std::vector<Article> articles;
  Split split = Split::train;

  std::size_t size() const { return articles.size(); }
  bool empty() const { return articles.empty(); }
};

struct Sentence {
  std::string text;
  std::string source_article;
  std::size_t index_in_article = 0;
};

// Corpus JSONL: one object per line, keys exactly "id", "article", "summary".
inline Corpus load_corpus(const std::string& path, Split split = Split::train) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open corpus file: " + path);

  Corpus corpus;
  corpus.split = split;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      raise(Errc::malformed_line,
            "malformed corpus line " + std::to_string(line_no) +
                ": invalid JSON");
    }
    for (const char* key : {"id", "article", "summary"}) {
      if (!obj.contains(key) || !obj[key].is_string()) {
        raise(Errc::malformed_line,
              "malformed corpus line " + std::to_string(line_no) +
                  ": missing string field \"" + key + "\"");
      }
    }
    Article article;
    article.id = trim(obj["id"].get<std::string>());
    article.text = trim(obj["article"].get<std::string>());
    article.summary = trim(obj["summary"].get<std::string>());
    if (article.id.empty() || article.text.empty() || article.summary.empty()) {
      raise(Errc::malformed_line,
            "malformed corpus line " + std::to_string(line_no) +
                ": empty field after trimming");
    }
    if (!seen_ids.insert(article.id).second) {
      raise(Errc::duplicate_id, "duplicate article id: " + article.id);
    }
    corpus.articles.push_back(std::move(article));
  }
  return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write corpus file: " + path);
  for (const Article& a : corpus.articles) {
    nlohmann::ordered_json obj;
    obj["id"] = a.id;
    obj["article"] = a.text;
    obj["summary"] = a.summary;
    out << obj.dump() << '\n';
  }
}

namespace detail {

inline const std::array<std::string_view, 7>& abbreviation_guards() {
  static const std::array<std::string_view, 7> guards = {
      "Mr.", "Mrs.", "Dr.", "U.S.", "e.g.", "i.e.", "etc."};
  return guards;
}

inline bool ends_with_guard(std::string_view word) {
  for (std::string_view g : abbreviation_guards()) {
    if (word == g) return true;
  }
  return false;
}

}  // namespace detail

// Rule-based segmenter: a boundary is '.', '!' or '?' followed by whitespace,
// unless the word ending there is a guarded abbreviation. Whitespace inside
// sentences is collapsed, so joining the result with single spaces gives back
// the whitespace-normalized input.
inline std::vector<std::string> segment_sentences(std::string_view text) {
  const std::string norm = collapse_whitespace(text);
  std::vector<std::string> sentences;
  if (norm.empty()) return sentences;

  std::size_t start = 0;
  std::size_t word_start = 0;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const char c = norm[i];
    if (c == ' ') {
      word_start = i + 1;
      continue;
    }
    const bool terminator = (c == '.' || c == '!' || c == '?');
    if (!terminator) continue;
    const bool at_break = (i + 1 < norm.size() && norm[i + 1] == ' ');
    if (!at_break) continue;
    const std::string_view word(norm.data() + word_start, i + 1 - word_start);
    if (detail::ends_with_guard(word)) continue;
    sentences.emplace_back(norm.substr(start, i + 1 - start));
    start = i + 2;  // skip the single space after the terminator
  }
  if (start < norm.size()) sentences.emplace_back(norm.substr(start));
  return sentences;
}

inline std::vector<Sentence> segment_article(const Article& article) {
  std::vector<Sentence> out;
  const std::vector<std::string> parts = segment_sentences(article.text);
  out.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.push_back(Sentence{parts[i], article.id, i});
  }
  return out;
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd r;
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - r.mean) * (x - r.mean);
  r.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
  return r;
}

struct CorpusStats {
  std::size_t count = 0;
  MeanStd article_tokens;
  MeanStd summary_tokens;
};

inline CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.empty()) raise(Errc::empty_corpus, "corpus_stats: empty corpus");
  std::vector<double> article_lengths;
  std::vector<double> summary_lengths;
  article_lengths.reserve(corpus.size());
  summary_lengths.reserve(corpus.size());
  for (const Article& a : corpus.articles) {
    article_lengths.push_back(
        static_cast<double>(count_whitespace_tokens(a.text)));
    summary_lengths.push_back(
        static_cast<double>(count_whitespace_tokens(a.summary)));
  }
  CorpusStats stats;
  stats.count = corpus.size();
  stats.article_tokens = mean_std(article_lengths);
  stats.summary_tokens = mean_std(summary_lengths);
  return stats;
}

}  // namespace ads
