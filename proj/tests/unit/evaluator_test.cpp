#include "ads/evaluator.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles/assignment_oracle.hpp"
#include "support/helpers.hpp"

using namespace ads;

namespace {

const TokenOverlapScorer kOverlap;

SummarySet set_of(std::vector<std::string> xs) {
  SummarySet s;
  s.summaries = std::move(xs);
  return s;
}

std::string render(const std::vector<std::string>& pieces) {
  return join(pieces, " [SEP] ");
}

}  // namespace

TEST_CASE("split_generated trims and drops empties") {
  CHECK(split_generated("s1 [SEP] s2").summaries ==
        std::vector<std::string>{"s1", "s2"});
  CHECK(split_generated("s1[SEP]  [SEP] s3").summaries ==
        std::vector<std::string>{"s1", "s3"});
  CHECK(split_generated("s1").summaries == std::vector<std::string>{"s1"});
  CHECK(split_generated("").summaries.empty());
  CHECK(split_generated("first line\ncontinued [SEP]\n s2 \n").summaries ==
        std::vector<std::string>{"first line\ncontinued", "s2"});
}

TEST_CASE("normalize_count pads, selects and merges") {
  // padding
  const SummarySet padded =
      normalize_count(set_of({"only"}), 3, NormalizeMethod::longest, kOverlap);
  CHECK(padded.summaries == std::vector<std::string>{"only", "", ""});

  // longest keeps original order
  const SummarySet longest = normalize_count(
      set_of({"aa", "dddd", "ccc"}), 2, NormalizeMethod::longest, kOverlap);
  CHECK(longest.summaries == std::vector<std::string>{"dddd", "ccc"});

  const SummarySet shortest = normalize_count(
      set_of({"aa", "dddd", "ccc"}), 2, NormalizeMethod::shortest, kOverlap);
  CHECK(shortest.summaries == std::vector<std::string>{"aa", "ccc"});

  // closest merges the highest-overlap pair into the earlier slot
  const SummarySet closest = normalize_count(
      set_of({"a b", "a b c", "x y"}), 2, NormalizeMethod::closest, kOverlap);
  CHECK(closest.summaries == std::vector<std::string>{"a b a b c", "x y"});

  // identity when sizes already match
  const SummarySet same = normalize_count(set_of({"p", "q"}), 2,
                                          NormalizeMethod::closest, kOverlap);
  CHECK(same.summaries == std::vector<std::string>{"p", "q"});

  CHECK_THROWS_AS(
      normalize_count(set_of({}), 0, NormalizeMethod::closest, kOverlap),
      Error);
}

TEST_CASE("normalize_count always returns exactly k") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 120; ++trial) {
    const int k = 1 + static_cast<int>(rng.next_below(4));
    const std::size_t m = rng.next_below(7);
    std::vector<std::string> pieces;
    for (std::size_t i = 0; i < m; ++i) {
      pieces.push_back(testsupport::random_token_text(rng, 6, 5));
    }
    for (NormalizeMethod method :
         {NormalizeMethod::closest, NormalizeMethod::longest,
          NormalizeMethod::shortest}) {
      const SummarySet out = normalize_count(set_of(pieces), k, method, kOverlap);
      CHECK(out.size() == static_cast<std::size_t>(k));
    }
  }
}

TEST_CASE("pair_summaries identity and K=1") {
  const SummarySet gen = set_of({"alpha one", "beta two", "gamma three"});
  const Pairing p =
      pair_summaries(gen, gen, PairingMode::greedy_unique);
  REQUIRE(p.assignment.size() == 3);
  for (const auto& [i, j] : p.assignment) CHECK(i == j);
  for (const RougeScores& s : p.per_pair) CHECK(s.rouge1.f1 == 1.0);

  const Pairing reuse = pair_summaries(gen, gen, PairingMode::argmax_reuse);
  for (const auto& [i, j] : reuse.assignment) CHECK(i == j);

  const Pairing single = pair_summaries(set_of({"one"}), set_of({"uno"}),
                                        PairingMode::greedy_unique);
  REQUIRE(single.assignment.size() == 1);
  CHECK(single.assignment[0] == std::pair<std::size_t, std::size_t>{0, 0});

  CHECK_THROWS_AS(
      pair_summaries(set_of({"a"}), set_of({"a", "b"}),
                     PairingMode::greedy_unique),
      Error);
}

TEST_CASE("greedy pairing replays the cell-greedy oracle") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    const int k = 1 + static_cast<int>(rng.next_below(4));
    std::vector<std::string> gen(k), refs(k);
    for (int i = 0; i < k; ++i) {
      gen[i] = testsupport::random_token_text(rng, 10, 6);
      refs[i] = testsupport::random_token_text(rng, 10, 6);
    }
    std::vector<std::vector<double>> affinity(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        affinity[i][j] = rouge_sum(gen[i], refs[j]);
      }
    }
    const auto expected = oracle::cell_greedy(affinity, gen, refs);
    const Pairing got =
        pair_summaries(set_of(gen), set_of(refs), PairingMode::greedy_unique);
    REQUIRE(got.assignment.size() == expected.size());
    for (std::size_t s = 0; s < expected.size(); ++s) {
      CHECK(got.assignment[s] == expected[s]);
    }
    // greedy total trails the exhaustive optimum by at most the oracle's own
    // measured greedy gap
    const double greedy_total = oracle::total_of(affinity, expected);
    const double optimal = oracle::exhaustive_best_total(affinity);
    const double gap = optimal - greedy_total;
    double got_total = 0.0;
    for (const RougeScores& s : got.per_pair) got_total += rouge_sum(s);
    CHECK(got_total >= optimal - gap - 1e-9);
  }
}

TEST_CASE("greedy pairing is a bijection; reference permutation is harmless") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 80; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    std::vector<std::string> gen(k), refs(k);
    for (int i = 0; i < k; ++i) {
      gen[i] = testsupport::random_token_text(rng, 12, 7);
      refs[i] = testsupport::random_token_text(rng, 12, 7);
    }
    const Pairing p =
        pair_summaries(set_of(gen), set_of(refs), PairingMode::greedy_unique);
    std::set<std::size_t> rows, cols;
    for (const auto& [i, j] : p.assignment) {
      rows.insert(i);
      cols.insert(j);
    }
    CHECK(rows.size() == static_cast<std::size_t>(k));
    CHECK(cols.size() == static_cast<std::size_t>(k));

    std::vector<std::string> shuffled = refs;
    rng.shuffle(shuffled);
    const Pairing q = pair_summaries(set_of(gen), set_of(shuffled),
                                     PairingMode::greedy_unique);
    std::multiset<double> scores_p, scores_q;
    for (const RougeScores& s : p.per_pair) scores_p.insert(rouge_sum(s));
    for (const RougeScores& s : q.per_pair) scores_q.insert(rouge_sum(s));
    CHECK(scores_p == scores_q);
    CHECK(mean_scores(p.per_pair).rouge1.f1 ==
          doctest::Approx(mean_scores(q.per_pair).rouge1.f1).epsilon(1e-12));
  }
}

TEST_CASE("argmax_reuse may reuse references") {
  // both generated rows prefer the same reference
  const SummarySet gen = set_of({"shared words here", "shared words there"});
  const SummarySet refs = set_of({"shared words here", "unrelated zzz qqq"});
  const Pairing p = pair_summaries(gen, refs, PairingMode::argmax_reuse);
  REQUIRE(p.assignment.size() == 2);
  CHECK(p.assignment[0].second == 0);
  CHECK(p.assignment[1].second == 0);
}

TEST_CASE("evaluate_sample end to end") {
  const std::string label = render({"first reference here", "second one now"});

  // verbatim output scores 1.0 everywhere
  const RougeScores perfect =
      evaluate_sample(label, label, 2, NormalizeMethod::closest,
                      PairingMode::greedy_unique, kOverlap);
  CHECK(perfect.rouge1.f1 == doctest::Approx(1.0));
  CHECK(perfect.rougeLsum.f1 == doctest::Approx(1.0));

  // empty output scores zero
  const RougeScores zero =
      evaluate_sample(label, "", 2, NormalizeMethod::closest,
                      PairingMode::greedy_unique, kOverlap);
  CHECK(zero.rouge1.f1 == 0.0);

  // one of three summaries verbatim: two pads contribute zeros
  const std::string label3 =
      render({"aa bb cc", "dd ee ff", "gg hh ii"});
  const RougeScores third =
      evaluate_sample(label3, "dd ee ff", 3, NormalizeMethod::closest,
                      PairingMode::greedy_unique, kOverlap);
  CHECK(third.rouge1.f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(third.rougeL.f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  // unparseable label
  CHECK_THROWS_AS(evaluate_sample(label, "x", 3, NormalizeMethod::closest,
                                  PairingMode::greedy_unique, kOverlap),
                  Error);
}

TEST_CASE("evaluate_sample ignores the order of generated summaries") {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    std::vector<std::string> refs(k);
    for (int i = 0; i < k; ++i) {
      refs[i] = testsupport::random_token_text(rng, 10, 6);
      if (refs[i].empty()) refs[i] = "ref" + std::to_string(i);
    }
    const std::size_t m = 1 + rng.next_below(static_cast<std::size_t>(k));
    std::vector<std::string> pieces;
    for (std::size_t i = 0; i < m; ++i) {
      pieces.push_back(testsupport::random_token_text(rng, 10, 6));
    }
    const std::string label = render(refs);
    const RougeScores base =
        evaluate_sample(label, render(pieces), k, NormalizeMethod::closest,
                        PairingMode::greedy_unique, kOverlap);
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      rng.shuffle(pieces);
      const RougeScores permuted =
          evaluate_sample(label, render(pieces), k, NormalizeMethod::closest,
                          PairingMode::greedy_unique, kOverlap);
      CHECK(permuted.rouge1.f1 == base.rouge1.f1);
      CHECK(permuted.rouge2.f1 == base.rouge2.f1);
      CHECK(permuted.rougeL.f1 == base.rougeL.f1);
      CHECK(permuted.rougeLsum.f1 == base.rougeLsum.f1);
    }
  }
}

TEST_CASE("padding both sides never raises the mean") {
  SplitMix64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + static_cast<int>(rng.next_below(3));
    std::vector<std::string> gen(k), refs(k);
    for (int i = 0; i < k; ++i) {
      gen[i] = testsupport::random_token_text(rng, 8, 5);
      refs[i] = testsupport::random_token_text(rng, 8, 5);
    }
    const Pairing before = pair_summaries(set_of(gen), set_of(refs),
                                          PairingMode::greedy_unique);
    std::vector<std::string> gen_padded = gen;
    std::vector<std::string> refs_padded = refs;
    gen_padded.emplace_back();
    refs_padded.emplace_back();
    const Pairing after = pair_summaries(set_of(gen_padded), set_of(refs_padded),
                                         PairingMode::greedy_unique);
    CHECK(mean_scores(after.per_pair).rouge1.f1 <=
          mean_scores(before.per_pair).rouge1.f1 + 1e-12);
  }
}

TEST_CASE("evaluate_dataset aggregates across seeds") {
  const Corpus corpus = testsupport::synthetic_corpus(12, 2);
  SynthConfig config;
  config.k = 2;
  config.seed = 0;
  const AdsDataset dataset = synthesize_dataset(corpus, config);

  std::unordered_map<std::string, std::string> perfect;
  for (const AdsSample& s : dataset.samples) perfect[s.id] = s.label;

  EvalConfig eval;
  SUBCASE("single seed, perfect predictions") {
    const EvalReport report =
        evaluate_dataset(dataset, {{0, perfect}}, eval, kOverlap);
    CHECK(report.rouge1.mean == doctest::Approx(1.0));
    CHECK(report.rouge1.stddev == doctest::Approx(0.0));
    REQUIRE(report.per_seed.size() == 1);
    CHECK(report.per_seed[0].per_sample.size() == dataset.samples.size());
  }

  SUBCASE("identical runs have zero std") {
    const EvalReport report = evaluate_dataset(
        dataset, {{0, perfect}, {10, perfect}, {42, perfect}}, eval, kOverlap);
    CHECK(report.rouge1.stddev == doctest::Approx(0.0));
    CHECK(report.rougeLsum.stddev == doctest::Approx(0.0));
  }

  SUBCASE("missing prediction is reported by id") {
    auto incomplete = perfect;
    incomplete.erase(dataset.samples[3].id);
    try {
      evaluate_dataset(dataset, {{0, incomplete}}, eval, kOverlap);
      FAIL("expected MissingPrediction");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::missing_prediction);
      CHECK(std::string(e.what()).find(dataset.samples[3].id) !=
            std::string::npos);
    }
  }
}

TEST_CASE("cross-seed mean and std arithmetic") {
  // two runs whose per-seed means differ: means 30 and 32 (x100) -> 31 (1)
  AdsDataset dataset;
  AdsSample s;
  s.id = "only";
  s.k = 1;
  s.content = "irrelevant.";
  s.label = "a b c d e f g h i j";
  dataset.samples.push_back(s);

  // candidate overlapping 3 of 10 reference tokens scores f1 = 2*0.3*1/(1.3)
  std::unordered_map<std::string, std::string> run_a{{"only", "a b c"}};
  std::unordered_map<std::string, std::string> run_b{{"only", "a b c d"}};
  const EvalReport report = evaluate_dataset(
      dataset, {{0, run_a}, {10, run_b}}, EvalConfig{}, kOverlap);
  const double f_a = 2.0 * (3.0 / 10.0) / (3.0 / 10.0 + 1.0);
  const double f_b = 2.0 * (4.0 / 10.0) / (4.0 / 10.0 + 1.0);
  const double mean = (f_a + f_b) / 2.0;
  const double stddev = std::abs(f_a - f_b) / 2.0;
  CHECK(report.rouge1.mean == doctest::Approx(mean).epsilon(1e-9));
  CHECK(report.rouge1.stddev == doctest::Approx(stddev).epsilon(1e-9));
}

TEST_CASE("predictions JSONL loads and validates") {
  testsupport::TempDir dir;
  const std::string path = dir.file("preds.jsonl");
  testsupport::write_file(path,
                          R"({"id":"a","generated":"text one"})"
                          "\n"
                          R"({"id":"b","generated":"text two [SEP] more"})"
                          "\n");
  const auto preds = load_predictions(path);
  CHECK(preds.size() == 2);
  CHECK(preds.at("b") == "text two [SEP] more");

  const std::string bad = dir.file("bad.jsonl");
  testsupport::write_file(bad, R"({"id":"a"})"
                               "\n");
  CHECK_THROWS_AS(load_predictions(bad), Error);
}
