// adsmix: synthesize ADS datasets from summarization corpora, run the
// multi-summary evaluation protocol, and drive the deterministic two-step
// baseline. Subcommands: synth, eval, analyze, baseline, rouge, stats.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ads/cluster_analysis.hpp"
#include "ads/corpus.hpp"
#include "ads/errors.hpp"
#include "ads/evaluator.hpp"
#include "ads/remote.hpp"
#include "ads/rouge.hpp"
#include "ads/sampler.hpp"
#include "ads/similarity.hpp"
#include "ads/synthesizer.hpp"
#include "ads/twostep.hpp"
#include "ads/version.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitService = 3;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) ads::raise(ads::Errc::io_error, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) ads::raise(ads::Errc::io_error, "cannot write file: " + path);
  out << content;
}

void emit(const ordered_json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_text_file(out_path, doc.dump(2) + "\n");
  }
}

// Sidecar metadata written next to every data artifact so a run can be
// reproduced from the file alone.
void write_meta(const std::string& artifact_path, const ordered_json& config,
                std::uint64_t seed) {
  ordered_json meta;
  meta["tool_version"] = ads::kVersion;
  meta["config"] = config;
  meta["seed"] = seed;
  write_text_file(artifact_path + ".meta.json", meta.dump(2) + "\n");
}

std::string substitute_seed(const std::string& pattern, std::int64_t seed) {
  const std::string token = "{seed}";
  std::string out = pattern;
  for (std::size_t pos = out.find(token); pos != std::string::npos;
       pos = out.find(token, pos)) {
    const std::string value = std::to_string(seed);
    out.replace(pos, token.size(), value);
    pos += value.size();
  }
  return out;
}

std::vector<std::int64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::int64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!ads::trim(item).empty()) seeds.push_back(std::stoll(ads::trim(item)));
  }
  if (seeds.empty()) ads::raise(ads::Errc::io_error, "empty seed list");
  return seeds;
}

std::string resolve_endpoint(const std::string& flag_value,
                             const std::string& env_value) {
  return !flag_value.empty() ? flag_value : env_value;
}

ordered_json metric_json(const ads::RougeScore& s) {
  ordered_json j;
  j["precision"] = ads::as_percent(s.precision);
  j["recall"] = ads::as_percent(s.recall);
  j["f1"] = ads::as_percent(s.f1);
  return j;
}

ordered_json stat_json(const ads::MetricStat& s) {
  ordered_json j;
  j["mean"] = ads::as_percent(s.mean);
  j["std"] = ads::as_percent(s.stddev);
  return j;
}

ordered_json mean_std_json(const ads::MeanStd& s) {
  ordered_json j;
  j["mean"] = s.mean;
  j["std"] = s.stddev;
  return j;
}

struct ScorerChoice {
  std::string kind = "overlap";  // overlap | tfidf | remote
  std::string embed_url;
};

std::unique_ptr<ads::SimilarityScorer> make_scorer(
    const ScorerChoice& choice, const std::vector<std::string>& fit_texts) {
  if (choice.kind == "overlap") {
    return std::make_unique<ads::TokenOverlapScorer>();
  }
  if (choice.kind == "tfidf") {
    auto provider = std::make_shared<const ads::TfidfProvider>(
        ads::TfidfProvider::fit(fit_texts));
    return std::make_unique<ads::EmbeddingCosineScorer>(
        provider, ads::ScorerKind::tfidf_cosine);
  }
  if (choice.kind == "remote") {
    ads::RemoteConfig remote;
    remote.endpoint =
        resolve_endpoint(choice.embed_url, ads::embed_endpoint_from_env());
    auto provider = std::make_shared<const ads::RemoteEmbeddingProvider>(remote);
    return std::make_unique<ads::EmbeddingCosineScorer>(
        provider, ads::ScorerKind::remote_embedding_cosine);
  }
  ads::raise(ads::Errc::io_error, "unknown scorer: " + choice.kind);
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  std::string corpus_path;
  std::string k_csv = "2";
  std::string selection = "random";
  std::string ordering = "cross";
  std::int64_t seed = 0;
  std::string seeds_csv;  // sweep mode when set
  std::string out;
  std::string split = "train";
  std::string embed = "tfidf";
  std::string embed_url;
  std::string partition_out;
  bool reassign_ids = false;
  int jobs = 0;
};

ads::Split parse_split(const std::string& name) {
  if (name == "train") return ads::Split::train;
  if (name == "validation") return ads::Split::validation;
  if (name == "test") return ads::Split::test;
  ads::raise(ads::Errc::io_error, "unknown split: " + name);
}

ordered_json synth_config_json(const SynthArgs& args, std::int64_t seed) {
  ordered_json j;
  j["subcommand"] = "synth";
  j["corpus"] = args.corpus_path;
  j["k"] = args.k_csv;
  j["selection"] = args.selection;
  j["ordering"] = args.ordering;
  j["seed"] = seed;
  j["split"] = args.split;
  j["embed"] = args.embed;
  j["reid"] = args.reassign_ids;
  return j;
}

ordered_json run_synth_once(const ads::Corpus& corpus, const SynthArgs& args,
                            std::int64_t seed, const std::string& out_path) {
  std::vector<int> ks;
  {
    std::stringstream ss(args.k_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!ads::trim(item).empty()) ks.push_back(std::stoi(ads::trim(item)));
    }
  }
  if (ks.empty()) ads::raise(ads::Errc::invalid_k, "no k values given");

  std::shared_ptr<const ads::EmbeddingProvider> embedder;
  if (args.selection == "minsim") {
    if (args.embed == "remote") {
      ads::RemoteConfig remote;
      remote.endpoint =
          resolve_endpoint(args.embed_url, ads::embed_endpoint_from_env());
      embedder = std::make_shared<const ads::RemoteEmbeddingProvider>(remote);
    } else {
      std::vector<std::string> summaries;
      summaries.reserve(corpus.size());
      for (const ads::Article& a : corpus.articles) {
        summaries.push_back(a.summary);
      }
      embedder = std::make_shared<const ads::TfidfProvider>(
          ads::TfidfProvider::fit(summaries));
    }
  }

  std::vector<ads::AdsDataset> parts;
  for (int k : ks) {
    ads::SynthConfig config;
    config.k = k;
    config.selection = args.selection == "minsim"
                           ? ads::Selection::min_similarity
                           : ads::Selection::random;
    config.ordering = ads::ordering_from_name(args.ordering);
    config.seed = static_cast<std::uint64_t>(seed);
    config.embedder = embedder;
    config.jobs = args.jobs;

    if (!args.partition_out.empty() && ks.size() == 1) {
      const ads::Partition partition =
          config.selection == ads::Selection::random
              ? ads::random_partition(corpus, k, config.seed)
              : ads::min_similarity_partition(corpus, k, *embedder);
      write_text_file(substitute_seed(args.partition_out, seed),
                      ads::partition_to_json(partition).dump(2) + "\n");
      parts.push_back(ads::synthesize_from_partition(corpus, partition, config));
    } else {
      parts.push_back(ads::synthesize_dataset(corpus, config));
    }
  }

  ads::AdsDataset dataset =
      parts.size() == 1
          ? std::move(parts.front())
          : ads::merge_variable(parts, static_cast<std::uint64_t>(seed),
                                args.reassign_ids);
  dataset.split = parse_split(args.split);
  ads::save_dataset(dataset, out_path);
  const ordered_json config = synth_config_json(args, seed);
  write_meta(out_path, config, static_cast<std::uint64_t>(seed));

  const ads::DatasetStats stats = ads::dataset_stats(dataset);
  ordered_json record;
  record["seed"] = seed;
  record["out"] = out_path;
  record["count"] = stats.count;
  ordered_json by_k = ordered_json::object();
  for (const auto& [k, n] : stats.count_by_k) by_k[std::to_string(k)] = n;
  record["count_by_k"] = by_k;
  record["content_tokens"] = mean_std_json(stats.content_tokens);
  record["label_tokens"] = mean_std_json(stats.label_tokens);
  return record;
}

int run_synth(const SynthArgs& args) {
  const ads::Corpus corpus =
      ads::load_corpus(args.corpus_path, parse_split(args.split));

  std::vector<std::int64_t> seeds;
  if (!args.seeds_csv.empty()) {
    seeds = parse_seed_list(args.seeds_csv);
  } else {
    seeds = {args.seed};
  }
  if (seeds.size() > 1 && args.out.find("{seed}") == std::string::npos) {
    ads::raise(ads::Errc::io_error,
               "--out must contain {seed} when sweeping multiple seeds");
  }

  ordered_json report;
  report["tool_version"] = ads::kVersion;
  report["config"] = synth_config_json(args, args.seed);
  report["seeds"] = seeds;
  ordered_json runs = ordered_json::array();
  for (std::int64_t seed : seeds) {
    runs.push_back(run_synth_once(corpus, args, seed,
                                  substitute_seed(args.out, seed)));
  }
  report["runs"] = std::move(runs);
  emit(report, "");
  return kExitOk;
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
  std::string dataset_path;
  std::string preds_path;  // may contain {seed}
  int k = 0;
  std::string normalize = "closest";
  std::string pairing = "greedy";
  std::string seeds_csv = "0,10,42";
  ScorerChoice scorer;
  std::string out;
  int jobs = 0;
};

int run_eval(const EvalArgs& args) {
  const ads::AdsDataset dataset = ads::load_dataset(args.dataset_path);
  const std::vector<std::int64_t> seeds = parse_seed_list(args.seeds_csv);

  std::vector<ads::SeedRun> runs;
  std::vector<std::string> fit_texts;
  for (std::int64_t seed : seeds) {
    ads::SeedRun run;
    run.seed = seed;
    run.predictions = ads::load_predictions(substitute_seed(args.preds_path, seed));
    if (args.scorer.kind == "tfidf") {
      for (const auto& [id, text] : run.predictions) fit_texts.push_back(text);
    }
    runs.push_back(std::move(run));
  }
  if (args.scorer.kind == "tfidf") {
    for (const ads::AdsSample& s : dataset.samples) fit_texts.push_back(s.label);
  }
  const auto scorer = make_scorer(args.scorer, fit_texts);

  ads::EvalConfig config;
  config.normalize = ads::normalize_method_from_name(args.normalize);
  config.pairing = args.pairing == "reuse" ? ads::PairingMode::argmax_reuse
                                           : ads::PairingMode::greedy_unique;
  config.k_override = args.k;
  config.jobs = args.jobs;

  const ads::EvalReport report = ads::evaluate_dataset(dataset, runs, config, *scorer);

  ordered_json doc;
  doc["tool_version"] = ads::kVersion;
  ordered_json config_json;
  config_json["subcommand"] = "eval";
  config_json["dataset"] = args.dataset_path;
  config_json["preds"] = args.preds_path;
  config_json["k"] = args.k;
  config_json["normalize"] = args.normalize;
  config_json["pairing"] = args.pairing;
  config_json["scorer"] = args.scorer.kind;
  config_json["seeds"] = seeds;
  doc["config"] = config_json;
  ordered_json per_seed = ordered_json::array();
  for (const ads::PerSeedResult& r : report.per_seed) {
    ordered_json row;
    row["seed"] = r.seed;
    row["rouge1"] = metric_json(r.mean.rouge1);
    row["rouge2"] = metric_json(r.mean.rouge2);
    row["rougeL"] = metric_json(r.mean.rougeL);
    row["rougeLsum"] = metric_json(r.mean.rougeLsum);
    per_seed.push_back(std::move(row));
  }
  doc["per_seed"] = std::move(per_seed);
  ordered_json metrics;
  metrics["rouge1"] = stat_json(report.rouge1);
  metrics["rouge2"] = stat_json(report.rouge2);
  metrics["rougeL"] = stat_json(report.rougeL);
  metrics["rougeLsum"] = stat_json(report.rougeLsum);
  doc["metrics"] = std::move(metrics);
  emit(doc, args.out);
  return kExitOk;
}

// -------------------------------------------------------------- analyze ----

struct AnalyzeArgs {
  std::string dataset_path;
  std::string preds_path;
  ScorerChoice scorer;
  std::string out;
  int jobs = 0;
};

int run_analyze(const AnalyzeArgs& args) {
  const ads::AdsDataset dataset = ads::load_dataset(args.dataset_path);
  const auto predictions = ads::load_predictions(args.preds_path);

  std::vector<std::string> fit_texts;
  if (args.scorer.kind == "tfidf") {
    for (const ads::AdsSample& s : dataset.samples) {
      for (const std::string& sentence : s.sentences) {
        fit_texts.push_back(sentence);
      }
    }
    for (const auto& [id, text] : predictions) fit_texts.push_back(text);
  }
  const auto scorer = make_scorer(args.scorer, fit_texts);

  const ads::ClusterReport report =
      ads::cluster_report(dataset, predictions, *scorer, args.jobs);

  ordered_json doc;
  doc["tool_version"] = ads::kVersion;
  ordered_json config_json;
  config_json["subcommand"] = "analyze";
  config_json["dataset"] = args.dataset_path;
  config_json["preds"] = args.preds_path;
  config_json["scorer"] = args.scorer.kind;
  doc["config"] = config_json;
  doc["clusters"] = mean_std_json(report.cluster_count);
  ordered_json f1;
  f1["mean"] = report.macro_f1.mean;
  f1["std"] = report.macro_f1.stddev;
  doc["macro_f1"] = std::move(f1);
  ordered_json samples = ordered_json::array();
  for (const ads::ClusterSampleRecord& r : report.samples) {
    ordered_json row;
    row["id"] = r.id;
    row["clusters"] = r.cluster_count;
    row["macro_f1"] = r.macro_f1;
    samples.push_back(std::move(row));
  }
  doc["samples"] = std::move(samples);
  emit(doc, args.out);
  return kExitOk;
}

// ------------------------------------------------------------- baseline ----

struct BaselineArgs {
  std::string dataset_path;
  int k = 0;  // 0: per-sample k
  std::string clusterer = "kmeans";
  std::string k_target = "k";  // "k", "auto" or a number
  std::string reduction = "least";
  std::string summarizer = "lead3";
  std::string summ_url;
  std::string embed = "tfidf";
  std::string embed_url;
  std::int64_t seed = 0;
  std::string seeds_csv;
  std::string out;
  int jobs = 0;
};

ordered_json baseline_config_json(const BaselineArgs& args, std::int64_t seed) {
  ordered_json j;
  j["subcommand"] = "baseline";
  j["dataset"] = args.dataset_path;
  j["k"] = args.k;
  j["clusterer"] = args.clusterer;
  j["k_target"] = args.k_target;
  j["reduction"] = args.reduction;
  j["summarizer"] = args.summarizer;
  j["embed"] = args.embed;
  j["seed"] = seed;
  return j;
}

ordered_json run_baseline_once(const ads::AdsDataset& dataset,
                               const BaselineArgs& args, std::int64_t seed,
                               const std::string& out_path) {
  ads::TwoStepConfig config;
  config.clusterer = args.clusterer == "agglo" ? ads::Clusterer::agglomerative
                                               : ads::Clusterer::kmeans;
  config.reduction = ads::reduction_from_name(args.reduction);
  config.seed = static_cast<std::uint64_t>(seed);

  if (args.summarizer == "remote") {
    config.summarizer.kind = ads::SummarizerConfig::Kind::remote;
    config.summarizer.remote.endpoint =
        resolve_endpoint(args.summ_url, ads::summarize_endpoint_from_env());
  } else if (args.summarizer.rfind("lead", 0) == 0) {
    config.summarizer.kind = ads::SummarizerConfig::Kind::lead_n;
    config.summarizer.lead_n = std::max(1, std::stoi(args.summarizer.substr(4)));
  } else {
    ads::raise(ads::Errc::io_error, "unknown summarizer: " + args.summarizer);
  }
  if (args.embed == "remote") {
    ads::RemoteConfig remote;
    remote.endpoint =
        resolve_endpoint(args.embed_url, ads::embed_endpoint_from_env());
    config.embedder = std::make_shared<const ads::RemoteEmbeddingProvider>(remote);
  }

  std::vector<std::string> lines(dataset.samples.size());
  ads::parallel_for(dataset.samples.size(), args.jobs, [&](std::size_t i) {
    const ads::AdsSample& sample = dataset.samples[i];
    const int k = args.k > 0 ? args.k : sample.k;
    ads::TwoStepConfig per_sample = config;
    if (args.k_target == "auto") {
      per_sample.k_target = std::nullopt;
    } else if (args.k_target == "k") {
      per_sample.k_target = k;
    } else {
      per_sample.k_target = std::stoi(args.k_target);
    }
    const ads::SummarySet summaries =
        sample.sentences.empty()
            ? ads::run_two_step(sample.content, k, per_sample)
            : ads::run_two_step(sample.sentences, k, per_sample);
    ordered_json obj;
    obj["id"] = sample.id;
    obj["generated"] = ads::join(summaries.summaries, " [SEP] ");
    lines[i] = obj.dump();
  });

  std::ofstream out(out_path);
  if (!out) ads::raise(ads::Errc::io_error, "cannot write: " + out_path);
  for (const std::string& line : lines) out << line << '\n';
  out.close();
  write_meta(out_path, baseline_config_json(args, seed),
             static_cast<std::uint64_t>(seed));

  ordered_json record;
  record["seed"] = seed;
  record["out"] = out_path;
  record["count"] = dataset.samples.size();
  return record;
}

int run_baseline(const BaselineArgs& args) {
  const ads::AdsDataset dataset = ads::load_dataset(args.dataset_path);
  std::vector<std::int64_t> seeds;
  if (!args.seeds_csv.empty()) {
    seeds = parse_seed_list(args.seeds_csv);
  } else {
    seeds = {args.seed};
  }
  if (seeds.size() > 1 && args.out.find("{seed}") == std::string::npos) {
    ads::raise(ads::Errc::io_error,
               "--out must contain {seed} when sweeping multiple seeds");
  }
  ordered_json report;
  report["tool_version"] = ads::kVersion;
  report["config"] = baseline_config_json(args, args.seed);
  ordered_json runs = ordered_json::array();
  for (std::int64_t seed : seeds) {
    runs.push_back(run_baseline_once(dataset, args, seed,
                                     substitute_seed(args.out, seed)));
  }
  report["runs"] = std::move(runs);
  emit(report, "");
  return kExitOk;
}

// ---------------------------------------------------------- rouge, stats ----

int run_rouge(const std::string& cand_path, const std::string& ref_path) {
  const std::string cand = read_text_file(cand_path);
  const std::string ref = read_text_file(ref_path);
  const ads::RougeScores s = ads::rouge_suite(cand, ref);
  ordered_json doc;
  doc["tool_version"] = ads::kVersion;
  doc["rouge1"] = metric_json(s.rouge1);
  doc["rouge2"] = metric_json(s.rouge2);
  doc["rougeL"] = metric_json(s.rougeL);
  doc["rougeLsum"] = metric_json(s.rougeLsum);
  doc["rouge_sum"] = ads::as_percent(ads::rouge_sum(s));
  emit(doc, "");
  return kExitOk;
}

int run_stats(const std::string& corpus_path, const std::string& dataset_path) {
  ordered_json doc;
  doc["tool_version"] = ads::kVersion;
  if (!corpus_path.empty()) {
    const ads::CorpusStats stats = ads::corpus_stats(ads::load_corpus(corpus_path));
    doc["corpus"] = corpus_path;
    doc["count"] = stats.count;
    doc["article_tokens"] = mean_std_json(stats.article_tokens);
    doc["summary_tokens"] = mean_std_json(stats.summary_tokens);
  } else {
    const ads::DatasetStats stats = ads::dataset_stats(ads::load_dataset(dataset_path));
    doc["dataset"] = dataset_path;
    doc["count"] = stats.count;
    ordered_json by_k = ordered_json::object();
    for (const auto& [k, n] : stats.count_by_k) by_k[std::to_string(k)] = n;
    doc["count_by_k"] = by_k;
    doc["content_tokens"] = mean_std_json(stats.content_tokens);
    doc["label_tokens"] = mean_std_json(stats.label_tokens);
  }
  emit(doc, "");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adsmix: ADS dataset synthesis and evaluation toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Synthesize an ADS dataset from a corpus");
  synth_cmd->add_option("--corpus", synth.corpus_path, "Corpus JSONL")->required();
  synth_cmd->add_option("--k", synth.k_csv,
                        "Summary number, or comma list for a merged "
                        "variable-K dataset");
  synth_cmd->add_option("--selection", synth.selection, "random|minsim")
      ->check(CLI::IsMember({"random", "minsim"}));
  synth_cmd->add_option("--ordering", synth.ordering, "none|in|cross")
      ->check(CLI::IsMember({"none", "in", "cross"}));
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--seeds", synth.seeds_csv,
                        "Comma list; sweep writing one dataset per seed");
  synth_cmd->add_option("--out", synth.out, "Output dataset JSONL")->required();
  synth_cmd->add_option("--split", synth.split, "train|validation|test")
      ->check(CLI::IsMember({"train", "validation", "test"}));
  synth_cmd->add_option("--embed", synth.embed, "tfidf|remote (for minsim)")
      ->check(CLI::IsMember({"tfidf", "remote"}));
  synth_cmd->add_option("--embed-url", synth.embed_url,
                        "Embedding service endpoint (or ADS_EMBED_URL)");
  synth_cmd->add_option("--partition-out", synth.partition_out,
                        "Write the partition JSON for audit (single --k only)");
  synth_cmd->add_flag("--reid", synth.reassign_ids,
                      "Reassign sample ids when merging multiple K");
  synth_cmd->add_option("--jobs", synth.jobs, "Worker threads");

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate predictions with the ADS protocol");
  eval_cmd->add_option("--dataset", eval.dataset_path, "Dataset JSONL")->required();
  eval_cmd->add_option("--preds", eval.preds_path,
                       "Predictions JSONL; {seed} expands per seed")
      ->required();
  eval_cmd->add_option("--k", eval.k, "Override K (default: per-sample)");
  eval_cmd->add_option("--normalize", eval.normalize, "closest|longest|shortest")
      ->check(CLI::IsMember({"closest", "longest", "shortest"}));
  eval_cmd->add_option("--pairing", eval.pairing, "greedy|reuse")
      ->check(CLI::IsMember({"greedy", "reuse"}));
  eval_cmd->add_option("--seeds", eval.seeds_csv, "Comma list (default 0,10,42)");
  eval_cmd->add_option("--scorer", eval.scorer.kind, "overlap|tfidf|remote")
      ->check(CLI::IsMember({"overlap", "tfidf", "remote"}));
  eval_cmd->add_option("--embed-url", eval.scorer.embed_url,
                       "Embedding service endpoint (or ADS_EMBED_URL)");
  eval_cmd->add_option("--out", eval.out, "Report path (default stdout)");
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads");

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Clustering-quality analysis of predictions");
  analyze_cmd->add_option("--dataset", analyze.dataset_path, "Dataset JSONL")
      ->required();
  analyze_cmd->add_option("--preds", analyze.preds_path, "Predictions JSONL")
      ->required();
  analyze_cmd->add_option("--scorer", analyze.scorer.kind, "overlap|tfidf|remote")
      ->check(CLI::IsMember({"overlap", "tfidf", "remote"}));
  analyze_cmd->add_option("--embed-url", analyze.scorer.embed_url,
                          "Embedding service endpoint (or ADS_EMBED_URL)");
  analyze_cmd->add_option("--out", analyze.out, "Report path (default stdout)");
  analyze_cmd->add_option("--jobs", analyze.jobs, "Worker threads");

  BaselineArgs baseline;
  CLI::App* baseline_cmd = app.add_subcommand(
      "baseline", "Run the two-step cluster-then-summarize baseline");
  baseline_cmd->add_option("--dataset", baseline.dataset_path, "Dataset JSONL")
      ->required();
  baseline_cmd->add_option("--k", baseline.k, "Summary number (default: per-sample)");
  baseline_cmd->add_option("--clusterer", baseline.clusterer, "kmeans|agglo")
      ->check(CLI::IsMember({"kmeans", "agglo"}));
  baseline_cmd->add_option("--k-target", baseline.k_target,
                           "Cluster count: k, auto, or a number");
  baseline_cmd->add_option("--reduction", baseline.reduction,
                           "least|closest|longest|shortest")
      ->check(CLI::IsMember({"least", "closest", "longest", "shortest"}));
  baseline_cmd->add_option("--summarizer", baseline.summarizer,
                           "leadN (e.g. lead3) or remote");
  baseline_cmd->add_option("--summ-url", baseline.summ_url,
                           "Summarization service endpoint (or ADS_SUMM_URL)");
  baseline_cmd->add_option("--embed", baseline.embed, "tfidf|remote")
      ->check(CLI::IsMember({"tfidf", "remote"}));
  baseline_cmd->add_option("--embed-url", baseline.embed_url,
                           "Embedding service endpoint (or ADS_EMBED_URL)");
  baseline_cmd->add_option("--seed", baseline.seed, "Random seed");
  baseline_cmd->add_option("--seeds", baseline.seeds_csv,
                           "Comma list; sweep writing one file per seed");
  baseline_cmd->add_option("--out", baseline.out, "Predictions JSONL")->required();
  baseline_cmd->add_option("--jobs", baseline.jobs, "Worker threads");

  std::string rouge_cand, rouge_ref;
  CLI::App* rouge_cmd =
      app.add_subcommand("rouge", "Score one candidate file against a reference");
  rouge_cmd->add_option("--cand", rouge_cand, "Candidate text file")->required();
  rouge_cmd->add_option("--ref", rouge_ref, "Reference text file")->required();

  std::string stats_corpus, stats_dataset;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Token statistics for a corpus or dataset");
  stats_cmd->add_option("--corpus", stats_corpus, "Corpus JSONL");
  stats_cmd->add_option("--dataset", stats_dataset, "Dataset JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (analyze_cmd->parsed()) return run_analyze(analyze);
    if (baseline_cmd->parsed()) return run_baseline(baseline);
    if (rouge_cmd->parsed()) return run_rouge(rouge_cand, rouge_ref);
    if (stats_cmd->parsed()) {
      if (stats_corpus.empty() == stats_dataset.empty()) {
        std::cerr << "stats: give exactly one of --corpus or --dataset\n";
        return kExitUsage;
      }
      return run_stats(stats_corpus, stats_dataset);
    }
  } catch (const ads::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_service_error() ? kExitService : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
