#include "ads/sampler.hpp"

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/helpers.hpp"

using namespace ads;

namespace {

Corpus tiny_corpus(std::size_t n) {
  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    corpus.articles.push_back({"a" + std::to_string(i), "Text " +
                               std::to_string(i) + ".",
                               "Summary " + std::to_string(i) + "."});
  }
  return corpus;
}

void check_coverage(const Partition& partition, const Corpus& corpus) {
  std::set<std::string> seen;
  for (const SampleGroup& g : partition.groups) {
    CHECK(g.article_ids.size() == static_cast<std::size_t>(partition.k));
    for (const std::string& id : g.article_ids) {
      CHECK(seen.insert(id).second);
    }
  }
  for (const std::string& id : partition.dropped_ids) {
    CHECK(seen.insert(id).second);
  }
  CHECK(seen.size() == corpus.size());
}

}  // namespace

TEST_CASE("random_partition count law at full corpus scale") {
  // chunk counts only; contents are irrelevant
  const Corpus train = tiny_corpus(287113);
  const Partition p2 = random_partition(train, 2, 0);
  CHECK(p2.groups.size() == 143556);
  CHECK(p2.dropped_ids.size() == 1);

  const Corpus test = tiny_corpus(11490);
  const Partition p4 = random_partition(test, 4, 0);
  CHECK(p4.groups.size() == 2872);
  CHECK(p4.dropped_ids.size() == 2);
}

TEST_CASE("random_partition small cases and coverage") {
  const Corpus corpus = tiny_corpus(3);
  const Partition p = random_partition(corpus, 3, 42);
  CHECK(p.groups.size() == 1);
  CHECK(p.dropped_ids.empty());
  check_coverage(p, corpus);

  CHECK_THROWS_AS(random_partition(corpus, 4, 0), Error);
  CHECK_THROWS_AS(random_partition(corpus, 0, 0), Error);
}

TEST_CASE("random_partition is deterministic per seed") {
  const Corpus corpus = tiny_corpus(97);
  const Partition a = random_partition(corpus, 3, 10);
  const Partition b = random_partition(corpus, 3, 10);
  REQUIRE(a.groups.size() == b.groups.size());
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    CHECK(a.groups[g].article_ids == b.groups[g].article_ids);
  }
  CHECK(a.dropped_ids == b.dropped_ids);

  const Partition c = random_partition(corpus, 3, 11);
  bool any_difference = false;
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    if (a.groups[g].article_ids != c.groups[g].article_ids) {
      any_difference = true;
    }
  }
  CHECK(any_difference);
  check_coverage(a, corpus);
}

TEST_CASE("min_similarity greedy hand trace") {
  Corpus corpus = tiny_corpus(3);
  testsupport::FixedProvider provider;
  provider.set(corpus.articles[0].summary, {1, 0});
  provider.set(corpus.articles[1].summary, {0, 1});
  provider.set(corpus.articles[2].summary, {1, 0});

  const Partition p = min_similarity_partition(corpus, 2, provider);
  REQUIRE(p.groups.size() == 1);
  CHECK(p.groups[0].article_ids == std::vector<std::string>{"a0", "a1"});
  CHECK(p.dropped_ids == std::vector<std::string>{"a2"});
  check_coverage(p, corpus);
}

TEST_CASE("min_similarity k=1 degenerates to singletons") {
  Corpus corpus = tiny_corpus(5);
  testsupport::FixedProvider provider;
  for (const Article& a : corpus.articles) provider.set(a.summary, {1, 2});
  const Partition p = min_similarity_partition(corpus, 1, provider);
  CHECK(p.groups.size() == 5);
  CHECK(p.dropped_ids.empty());
  check_coverage(p, corpus);
}

TEST_CASE("min_similarity ties fall back to corpus order") {
  Corpus corpus = tiny_corpus(4);
  testsupport::FixedProvider provider;
  for (const Article& a : corpus.articles) provider.set(a.summary, {3, 1});
  const Partition p = min_similarity_partition(corpus, 2, provider);
  REQUIRE(p.groups.size() == 2);
  CHECK(p.groups[0].article_ids == std::vector<std::string>{"a0", "a1"});
  CHECK(p.groups[1].article_ids == std::vector<std::string>{"a2", "a3"});
  CHECK(p.dropped_ids.empty());
}

TEST_CASE("min_similarity pairs distant clusters, random does not") {
  // two tight embedding clusters; groups of 2 should straddle them
  const std::size_t per_side = 40;
  Corpus corpus = tiny_corpus(2 * per_side);
  testsupport::FixedProvider provider;
  SplitMix64 rng(5);
  std::vector<bool> side(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    side[i] = i % 2 == 1;
    const double jitter = static_cast<double>(rng.next_below(100)) / 1000.0;
    if (side[i]) {
      provider.set(corpus.articles[i].summary, {jitter, 1.0});
    } else {
      provider.set(corpus.articles[i].summary, {1.0, jitter});
    }
  }
  auto side_of = [&](const std::string& id) {
    return side[static_cast<std::size_t>(std::stoi(id.substr(1)))];
  };
  auto mixed_fraction = [&](const Partition& p) {
    std::size_t mixed = 0;
    for (const SampleGroup& g : p.groups) {
      if (side_of(g.article_ids[0]) != side_of(g.article_ids[1])) ++mixed;
    }
    return static_cast<double>(mixed) / static_cast<double>(p.groups.size());
  };
  auto mean_within_similarity = [&](const Partition& p) {
    double total = 0.0;
    for (const SampleGroup& g : p.groups) {
      const Article& x = corpus.articles[static_cast<std::size_t>(
          std::stoi(g.article_ids[0].substr(1)))];
      const Article& y = corpus.articles[static_cast<std::size_t>(
          std::stoi(g.article_ids[1].substr(1)))];
      total += cosine_similarity(provider.embed(x.summary),
                                 provider.embed(y.summary));
    }
    return total / static_cast<double>(p.groups.size());
  };

  const Partition minsim = min_similarity_partition(corpus, 2, provider);
  CHECK(minsim.groups.size() == per_side);
  CHECK(mixed_fraction(minsim) == doctest::Approx(1.0));
  check_coverage(minsim, corpus);

  double random_similarity_total = 0.0;
  const int trials = 100;
  for (int seed = 0; seed < trials; ++seed) {
    const Partition random = random_partition(corpus, 2, seed);
    random_similarity_total += mean_within_similarity(random);
  }
  const double random_mean = random_similarity_total / trials;
  CHECK(mean_within_similarity(minsim) < random_mean);
}

TEST_CASE("partition serializes for audit") {
  const Corpus corpus = tiny_corpus(5);
  const Partition p = random_partition(corpus, 2, 42);
  const nlohmann::ordered_json j = partition_to_json(p);
  CHECK(j["selection"] == "random");
  CHECK(j["seed"] == 42);
  CHECK(j["k"] == 2);
  CHECK(j["groups"].size() == 2);
  CHECK(j["dropped"].size() == 1);
}
