#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ads/corpus.hpp"
#include "ads/rng.hpp"
#include "ads/similarity.hpp"

namespace testsupport {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("adsmix_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Embedding provider with a fixed text -> vector table.
class FixedProvider : public ads::EmbeddingProvider {
 public:
  void set(const std::string& text, std::vector<double> values) {
    table_[text] = ads::EmbeddingVector{std::move(values)};
  }
  ads::EmbeddingVector embed(const std::string& text) const override {
    return table_.at(text);
  }

 private:
  std::unordered_map<std::string, ads::EmbeddingVector> table_;
};

// Deterministic corpus of small multi-sentence articles.
inline ads::Corpus synthetic_corpus(std::size_t n_articles,
                                    std::uint64_t seed = 7,
                                    std::size_t max_sentences = 4) {
  ads::SplitMix64 rng(seed);
  ads::Corpus corpus;
  corpus.articles.reserve(n_articles);
  for (std::size_t i = 0; i < n_articles; ++i) {
    ads::Article a;
    a.id = "art" + std::to_string(i);
    const std::size_t n_sent = 1 + rng.next_below(max_sentences);
    std::string text;
    for (std::size_t s = 0; s < n_sent; ++s) {
      if (s) text += " ";
      text += "w" + std::to_string(i) + "x" + std::to_string(s) + " t" +
              std::to_string(rng.next_below(50)) + ".";
    }
    a.text = text;
    a.summary = "sum" + std::to_string(i) + " s" +
                std::to_string(rng.next_below(30)) + ".";
    corpus.articles.push_back(std::move(a));
  }
  return corpus;
}

// Random token sequence rendered to a string; optional newline separators.
inline std::string random_token_text(ads::SplitMix64& rng, std::size_t max_len,
                                     std::size_t alphabet,
                                     bool allow_newlines = false) {
  const std::size_t len = rng.next_below(max_len + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) {
      const bool nl = allow_newlines && rng.next_below(6) == 0;
      out.push_back(nl ? '\n' : ' ');
    }
    out += "tok" + std::to_string(rng.next_below(alphabet));
  }
  return out;
}

}  // namespace testsupport
