// Command-line front end: index building, model training, ranking,
// evaluation, system comparison, window / expansion sweeps, the scaling
// benchmark and the synthetic corpus generator.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 format, 4 numeric.
// Environment: SERT_THREADS (Eigen thread count), SERT_PRECISION
// ("float32" default, "float64" for double-precision training/scoring).

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sert/baselines.hpp"
#include "sert/bench.hpp"
#include "sert/corpus.hpp"
#include "sert/eval.hpp"
#include "sert/model.hpp"
#include "sert/model_io.hpp"
#include "sert/synthetic.hpp"
#include "sert/tokenizer.hpp"
#include "sert/training.hpp"
#include "sert/trec.hpp"
#include "sert/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool use_float64() {
  const char* precision = std::getenv("SERT_PRECISION");
  if (precision == nullptr || std::string_view(precision) == "float32") return false;
  if (std::string_view(precision) == "float64") return true;
  throw sert::InvalidArgument("SERT_PRECISION must be float32 or float64");
}

void apply_thread_env() {
  if (const char* threads = std::getenv("SERT_THREADS")) {
    const int count = std::atoi(threads);
    if (count < 1) throw sert::InvalidArgument("SERT_THREADS must be a positive integer");
    Eigen::setNbThreads(count);
  }
}

sert::Tokenizer make_tokenizer(const std::string& stopword_path) {
  if (stopword_path.empty()) return sert::Tokenizer{};
  return sert::Tokenizer::from_stopword_file(stopword_path);
}

struct IndexPaths {
  fs::path vocabulary, encoded, registry;
  explicit IndexPaths(const std::string& dir)
      : vocabulary(fs::path(dir) / "vocabulary.tsv"),
        encoded(fs::path(dir) / "encoded.tsv"),
        registry(fs::path(dir) / "registry.tsv") {}
};

struct LoadedIndex {
  sert::Vocabulary vocabulary;
  sert::EncodedCorpus corpus;
};

LoadedIndex load_index(const std::string& dir) {
  const IndexPaths paths(dir);
  LoadedIndex index;
  index.vocabulary = sert::Vocabulary::load(paths.vocabulary.string());
  index.corpus = sert::load_encoded_corpus(paths.encoded.string(), paths.registry.string());
  return index;
}

json metrics_to_json(const sert::MetricReport& report) {
  json per_query = json::object();
  for (const auto& [query_id, m] : report.per_query) {
    per_query[query_id] = {{"ap", m.ap},
                           {"rr", m.rr},
                           {"ndcg100", m.ndcg100},
                           {"p5", m.p5},
                           {"p10", m.p10}};
  }
  return {{"per_query", per_query},
          {"aggregate",
           {{"map", report.aggregate.ap},
            {"mrr", report.aggregate.rr},
            {"ndcg100", report.aggregate.ndcg100},
            {"p5", report.aggregate.p5},
            {"p10", report.aggregate.p10},
            {"evaluated_queries", report.evaluated_queries},
            {"skipped_no_relevant", report.skipped_no_relevant}}}};
}

void write_json_file(const json& value, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sert::IoError("cannot open for writing: " + path);
  out << value.dump(2) << '\n';
  if (!out) throw sert::IoError("failed writing: " + path);
}

void print_metric_table(const std::string& name, const sert::QueryMetrics& m) {
  std::printf("%-12s  MAP %.4f  MRR %.4f  NDCG@100 %.4f  P@5 %.4f  P@10 %.4f\n",
              name.c_str(), m.ap, m.rr, m.ndcg100, m.p5, m.p10);
}

std::vector<double> metric_vector(const sert::MetricReport& report,
                                  const std::vector<std::string>& queries,
                                  double sert::QueryMetrics::* field) {
  std::vector<double> values;
  values.reserve(queries.size());
  for (const auto& query : queries) {
    auto it = report.per_query.find(query);
    values.push_back(it == report.per_query.end() ? 0.0 : it->second.*field);
  }
  return values;
}

/// Reciprocal-rank fusion of two run files (string candidate ids, ties by
/// candidate ascending). Both runs must rank the same candidate set per
/// shared query.
sert::Run fuse_runs(const sert::Run& run_a, const sert::Run& run_b) {
  sert::Run fused;
  for (const auto& [query_id, entries_a] : run_a) {
    auto it = run_b.find(query_id);
    if (it == run_b.end()) continue;
    const auto& entries_b = it->second;
    if (entries_a.size() != entries_b.size()) {
      throw sert::InvalidArgument("runs rank different candidate sets for query " + query_id);
    }
    std::map<std::string, std::size_t> rank_b;
    for (std::size_t i = 0; i < entries_b.size(); ++i) {
      rank_b.emplace(entries_b[i].candidate, i + 1);
    }
    std::vector<sert::RunEntry> fused_entries;
    fused_entries.reserve(entries_a.size());
    for (std::size_t i = 0; i < entries_a.size(); ++i) {
      auto rank_it = rank_b.find(entries_a[i].candidate);
      if (rank_it == rank_b.end()) {
        throw sert::InvalidArgument("runs rank different candidate sets for query " +
                                    query_id);
      }
      fused_entries.push_back(
          {entries_a[i].candidate,
           1.0 / (static_cast<double>(i + 1) * static_cast<double>(rank_it->second))});
    }
    std::sort(fused_entries.begin(), fused_entries.end(),
              [](const sert::RunEntry& a, const sert::RunEntry& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.candidate < b.candidate;
              });
    fused[query_id] = std::move(fused_entries);
  }
  if (fused.empty()) {
    throw sert::InvalidArgument("runs share no queries");
  }
  return fused;
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  sert::SyntheticOptions base;
  bool mixed = false;
  sert::MixedSyntheticOptions mixed_options;
};

void cmd_synth(const SynthArgs& args) {
  fs::create_directories(args.out_dir);
  sert::SyntheticCorpus corpus;
  if (args.mixed) {
    corpus = sert::generate_mixed_synthetic_corpus(args.mixed_options);
  } else {
    corpus = sert::generate_synthetic_corpus(args.base);
  }
  const fs::path dir(args.out_dir);
  sert::write_jsonl_corpus(corpus.documents, (dir / "corpus.jsonl").string());
  sert::write_queries((dir / "queries.tsv").string(), corpus.queries);
  sert::write_qrels((dir / "qrels.txt").string(), corpus.qrels);
  std::printf("wrote %zu documents, %zu queries to %s\n", corpus.documents.size(),
              corpus.queries.size(), args.out_dir.c_str());
}

struct IndexArgs {
  std::string corpus_path;
  std::string out_dir;
  std::size_t vocab_size = sert::Vocabulary::kDefaultSizeLimit;
  std::string stopwords;
};

void cmd_index(const IndexArgs& args) {
  const auto tokenizer = make_tokenizer(args.stopwords);
  const auto raw = sert::read_jsonl_corpus(args.corpus_path);
  const auto vocabulary = sert::build_vocabulary(raw, tokenizer, args.vocab_size);
  const auto corpus = sert::encode_corpus(raw, tokenizer, vocabulary);

  fs::create_directories(args.out_dir);
  const IndexPaths paths(args.out_dir);
  vocabulary.save(paths.vocabulary.string());
  sert::save_encoded_corpus(corpus, paths.encoded.string(), paths.registry.string());
  std::printf("indexed %zu documents; vocabulary %zu tokens; %zu candidates\n",
              corpus.documents.size(), vocabulary.size(), corpus.registry.size());
}

struct TrainArgs {
  std::string index_dir;
  std::string model_path;
  std::string log_path;
  sert::TrainingConfig config;
  std::string optimizer = "adadelta";
  std::string init_embeddings;
};

void cmd_train(const TrainArgs& args) {
  auto config = args.config;
  if (!args.init_embeddings.empty()) config.init_embeddings = args.init_embeddings;
  if (args.optimizer == "adadelta") {
    config.optimizer = sert::TrainingConfig::Optimizer::Adadelta;
  } else if (args.optimizer == "sgd") {
    config.optimizer = sert::TrainingConfig::Optimizer::Sgd;
  } else {
    throw sert::InvalidArgument("unknown optimizer: " + args.optimizer);
  }
  config.validate();

  const auto index = load_index(args.index_dir);
  std::vector<sert::TrainLogEntry> log;
  sert::LogLinearModel<float> model;
  if (use_float64()) {
    auto result = sert::train<double>(index.corpus.documents, index.vocabulary,
                                      index.corpus.registry, config);
    log = std::move(result.log);
    model = result.model.cast<float>();
  } else {
    auto result = sert::train<float>(index.corpus.documents, index.vocabulary,
                                     index.corpus.registry, config);
    log = std::move(result.log);
    model = std::move(result.model);
  }
  sert::save_model(model, args.model_path);

  if (!args.log_path.empty()) {
    std::ofstream out(args.log_path);
    if (!out) throw sert::IoError("cannot open for writing: " + args.log_path);
    for (const auto& entry : log) {
      out << json{{"batch", entry.batch},
                  {"loss", entry.loss},
                  {"ce", entry.ce},
                  {"reg", entry.reg}}
                 .dump()
          << '\n';
    }
  }
  if (!log.empty()) {
    std::printf("trained %zu batches; first loss %.6f, last loss %.6f\n", log.size(),
                log.front().loss, log.back().loss);
  } else {
    std::printf("epochs=0: wrote the initialized model\n");
  }
}

struct RankArgs {
  std::string system = "loglinear";
  std::string model_path;
  std::string index_dir;
  std::string queries_path;
  std::string out_path;
  std::string tag;
  std::string stopwords;
  std::string smoothing = "jm";
  double lambda = 0.5;
  double beta = 0.0;  // 0 = average document length
  bool strict_oov = false;
};

sert::SmoothingSpec make_smoothing(const std::string& kind, double lambda, double beta) {
  if (kind == "jm") return sert::SmoothingSpec::jelinek_mercer(lambda);
  if (kind == "dirichlet" || kind == "d") {
    return beta > 0.0 ? sert::SmoothingSpec::dirichlet(beta)
                      : sert::SmoothingSpec::dirichlet();
  }
  throw sert::InvalidArgument("unknown smoothing: " + kind);
}

template <class Scalar>
sert::Run rank_queries(const sert::LogLinearModel<Scalar>& model,
                       const sert::Tokenizer& tokenizer,
                       const std::vector<sert::Query>& queries, bool strict_oov) {
  sert::Run run;
  for (const auto& query : queries) {
    try {
      const auto ranking =
          sert::rank(model, tokenizer, query.query_id, query.text, !strict_oov);
      run[query.query_id] = sert::to_run_entries(ranking, model.registry);
    } catch (const sert::EmptyQueryError& e) {
      std::fprintf(stderr, "skipping query %s: %s\n", query.query_id.c_str(), e.what());
    }
  }
  if (run.empty()) {
    throw sert::EmptyQueryError("no query produced a ranking");
  }
  return run;
}

void cmd_rank(const RankArgs& args) {
  const auto tokenizer = make_tokenizer(args.stopwords);
  const auto queries = sert::read_queries(args.queries_path);

  sert::Run run;
  std::string tag = args.tag;
  if (args.system == "loglinear") {
    if (args.model_path.empty()) {
      throw sert::InvalidArgument("--system loglinear needs --model");
    }
    const auto model = sert::load_model(args.model_path);
    if (use_float64()) {
      run = rank_queries(model.cast<double>(), tokenizer, queries, args.strict_oov);
    } else {
      run = rank_queries(model, tokenizer, queries, args.strict_oov);
    }
    if (tag.empty()) tag = "loglinear";
  } else if (args.system == "model1" || args.system == "model2" ||
             args.system == "tfidf") {
    if (args.index_dir.empty()) {
      throw sert::InvalidArgument("baseline systems need --index-dir");
    }
    const auto index = load_index(args.index_dir);
    const auto stats =
        sert::CollectionStatistics::build(index.corpus.documents, index.corpus.registry);
    const auto smoothing = make_smoothing(args.smoothing, args.lambda, args.beta);
    for (const auto& query : queries) {
      const auto ids = index.vocabulary.encode(tokenizer.tokenize(query.text));
      try {
        sert::Ranking ranking;
        if (args.system == "model1") {
          ranking = sert::model1_rank(stats, ids, smoothing, query.query_id);
        } else if (args.system == "model2") {
          ranking = sert::model2_rank(stats, ids, smoothing, query.query_id);
        } else {
          ranking = sert::tfidf_rank(stats, ids, query.query_id);
        }
        run[query.query_id] = sert::to_run_entries(ranking, index.corpus.registry);
      } catch (const sert::EmptyQueryError& e) {
        std::fprintf(stderr, "skipping query %s: %s\n", query.query_id.c_str(), e.what());
      }
    }
    if (run.empty()) {
      throw sert::EmptyQueryError("no query produced a ranking");
    }
    if (tag.empty()) {
      tag = args.system == "tfidf" ? args.system : args.system + "-" + args.smoothing;
    }
  } else {
    throw sert::InvalidArgument("unknown system: " + args.system);
  }
  sert::write_run(args.out_path, run, tag);
  std::printf("ranked %zu queries into %s\n", run.size(), args.out_path.c_str());
}

struct EvalArgs {
  std::string run_path;
  std::string qrels_path;
  std::string json_path;
  bool binary_gain = false;
  bool entropy_correlation = false;
  std::size_t permutations = 10000;
  std::uint64_t seed = 42;
};

void cmd_eval(const EvalArgs& args) {
  const auto run = sert::read_run(args.run_path);
  const auto qrels = sert::read_qrels(args.qrels_path);
  const auto report = sert::metrics(run, qrels, args.binary_gain);

  print_metric_table("aggregate", report.aggregate);
  std::printf("evaluated %zu queries (%zu skipped without relevant candidates)\n",
              report.evaluated_queries, report.skipped_no_relevant);

  json out = metrics_to_json(report);
  if (args.entropy_correlation) {
    // Requires run scores to be normalized log-probabilities.
    const auto [r, p] =
        sert::entropy_ap_correlation(run, qrels, args.permutations, args.seed);
    std::printf("entropy/AP Pearson r %.4f (permutation p %.4f)\n", r, p);
    out["entropy_ap"] = {{"pearson_r", r}, {"p_value", p}};
  }
  if (!args.json_path.empty()) {
    write_json_file(out, args.json_path);
  }
}

struct CompareArgs {
  std::string run_a_path;
  std::string run_b_path;
  std::string qrels_path;
  std::string csv_path;
  std::string json_path;
  std::string ensemble_path;
  std::string ensemble_tag = "ensemble";
  std::size_t permutations = 100000;
  std::uint64_t seed = 42;
  bool binary_gain = false;
};

void cmd_compare(const CompareArgs& args) {
  const auto run_a = sert::read_run(args.run_a_path);
  const auto run_b = sert::read_run(args.run_b_path);
  const auto qrels = sert::read_qrels(args.qrels_path);
  const auto report_a = sert::metrics(run_a, qrels, args.binary_gain);
  const auto report_b = sert::metrics(run_b, qrels, args.binary_gain);

  std::vector<std::string> queries;
  for (const auto& [query_id, m] : report_a.per_query) queries.push_back(query_id);

  struct MetricField {
    const char* name;
    double sert::QueryMetrics::* field;
  };
  const MetricField fields[] = {{"map", &sert::QueryMetrics::ap},
                                {"mrr", &sert::QueryMetrics::rr},
                                {"ndcg100", &sert::QueryMetrics::ndcg100},
                                {"p5", &sert::QueryMetrics::p5},
                                {"p10", &sert::QueryMetrics::p10}};

  std::vector<sert::SignificanceResult> significance;
  std::vector<double> raw_p;
  for (const auto& field : fields) {
    const auto a = metric_vector(report_a, queries, field.field);
    const auto b = metric_vector(report_b, queries, field.field);
    sert::SignificanceResult result;
    result.metric = field.name;
    result.mean_a = report_a.aggregate.*(field.field);
    result.mean_b = report_b.aggregate.*(field.field);
    result.mean_difference = result.mean_a - result.mean_b;
    result.p_raw = sert::randomization_test(a, b, args.permutations, args.seed);
    result.permutations = args.permutations;
    significance.push_back(result);
    raw_p.push_back(result.p_raw);
  }
  const auto adjusted = sert::benjamini_hochberg(raw_p);
  for (std::size_t i = 0; i < significance.size(); ++i) {
    significance[i].p_adjusted = adjusted[i];
  }

  print_metric_table("run_a", report_a.aggregate);
  print_metric_table("run_b", report_b.aggregate);
  for (const auto& result : significance) {
    std::printf("%-8s  diff %+.4f  p %.4f  p_adj %.4f\n", result.metric.c_str(),
                result.mean_difference, result.p_raw, result.p_adjusted);
  }

  if (!args.csv_path.empty()) {
    std::ofstream csv(args.csv_path);
    if (!csv) throw sert::IoError("cannot open for writing: " + args.csv_path);
    csv << "query,ap_a,ap_b,ap_difference\n";
    for (const auto& query : queries) {
      const double ap_a = report_a.per_query.at(query).ap;
      const auto it = report_b.per_query.find(query);
      const double ap_b = it == report_b.per_query.end() ? 0.0 : it->second.ap;
      csv << query << ',' << ap_a << ',' << ap_b << ',' << (ap_a - ap_b) << '\n';
    }
  }

  if (!args.json_path.empty()) {
    json out = {{"run_a", metrics_to_json(report_a)}, {"run_b", metrics_to_json(report_b)}};
    out["significance"] = json::array();
    for (const auto& result : significance) {
      out["significance"].push_back({{"metric", result.metric},
                                     {"mean_a", result.mean_a},
                                     {"mean_b", result.mean_b},
                                     {"difference", result.mean_difference},
                                     {"p_raw", result.p_raw},
                                     {"p_adjusted", result.p_adjusted},
                                     {"permutations", result.permutations}});
    }
    write_json_file(out, args.json_path);
  }

  if (!args.ensemble_path.empty()) {
    const auto fused = fuse_runs(run_a, run_b);
    sert::write_run(args.ensemble_path, fused, args.ensemble_tag);
    const auto fused_report = sert::metrics(fused, qrels, args.binary_gain);
    print_metric_table("ensemble", fused_report.aggregate);
  }
}

struct SweepWindowArgs {
  std::string index_dir;
  std::string queries_path;
  std::string qrels_path;
  std::string csv_path;
  std::string stopwords;
  std::vector<std::size_t> windows{1, 2, 4, 8, 16, 32};
  sert::TrainingConfig config;
};

void cmd_sweep_window(const SweepWindowArgs& args) {
  const auto index = load_index(args.index_dir);
  const auto tokenizer = make_tokenizer(args.stopwords);
  const auto queries = sert::read_queries(args.queries_path);
  const auto qrels = sert::read_qrels(args.qrels_path);

  std::ofstream csv;
  if (!args.csv_path.empty()) {
    csv.open(args.csv_path);
    if (!csv) throw sert::IoError("cannot open for writing: " + args.csv_path);
    csv << "window,map,mrr\n";
  }

  for (std::size_t window : args.windows) {
    auto config = args.config;
    config.window = window;
    const auto result = sert::train<float>(index.corpus.documents, index.vocabulary,
                                           index.corpus.registry, config);
    const auto run = rank_queries(result.model, tokenizer, queries, false);
    const auto report = sert::metrics(run, qrels);
    std::printf("n=%-3zu  MAP %.4f  MRR %.4f\n", window, report.aggregate.ap,
                report.aggregate.rr);
    if (csv.is_open()) {
      csv << window << ',' << report.aggregate.ap << ',' << report.aggregate.rr << '\n';
    }
  }
}

struct ExpandSweepArgs {
  std::string model_path;
  std::string index_dir;
  std::string queries_path;
  std::string qrels_path;
  std::string csv_path;
  std::string stopwords;
  std::vector<std::size_t> ks{0, 1, 2, 3, 5, 10};
  std::string smoothing = "jm";
  double lambda = 0.5;
  double beta = 0.0;  // 0 = average document length
};

void cmd_expand_sweep(const ExpandSweepArgs& args) {
  const auto model = sert::load_model(args.model_path);
  const auto index = load_index(args.index_dir);
  const auto tokenizer = make_tokenizer(args.stopwords);
  const auto queries = sert::read_queries(args.queries_path);
  const auto qrels = sert::read_qrels(args.qrels_path);
  const auto stats =
      sert::CollectionStatistics::build(index.corpus.documents, index.corpus.registry);

  const auto smoothing = make_smoothing(args.smoothing, args.lambda, args.beta);

  std::ofstream csv;
  if (!args.csv_path.empty()) {
    csv.open(args.csv_path);
    if (!csv) throw sert::IoError("cannot open for writing: " + args.csv_path);
    csv << "k,map,mrr\n";
  }

  for (std::size_t k : args.ks) {
    sert::Run run;
    for (const auto& query : queries) {
      std::vector<sert::TokenId> ids;
      for (const auto& token : tokenizer.tokenize(query.text)) {
        if (auto id = model.vocabulary.id_of(token)) ids.push_back(*id);
      }
      if (ids.empty()) {
        std::fprintf(stderr, "skipping query %s: no in-vocabulary terms\n",
                     query.query_id.c_str());
        continue;
      }
      const auto ranking =
          sert::expanded_query_rank(model, stats, ids, k, smoothing, query.query_id);
      run[query.query_id] = sert::to_run_entries(ranking, model.registry);
    }
    const auto report = sert::metrics(run, qrels);
    std::printf("k=%-3zu  MAP %.4f  MRR %.4f\n", k, report.aggregate.ap,
                report.aggregate.rr);
    if (csv.is_open()) {
      csv << k << ',' << report.aggregate.ap << ',' << report.aggregate.rr << '\n';
    }
  }
}

struct BenchArgs {
  std::vector<std::size_t> candidate_grid{100, 200, 400, 800};
  std::vector<std::size_t> document_grid{500, 1000, 2000, 4000};
  std::string json_path;
  sert::BenchConfig config;
  bool skip_baselines = false;
};

void cmd_bench(const BenchArgs& args) {
  const auto points = sert::bench_loglinear_rank(args.candidate_grid, args.config);
  const auto fit = sert::fit_points(points);
  json out;
  out["loglinear"] = {{"points", json::array()},
                      {"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"r_squared", fit.r_squared}};
  std::printf("log-linear rank vs |C|: slope %.3e s/candidate, R^2 %.4f\n", fit.slope,
              fit.r_squared);
  for (const auto& point : points) {
    out["loglinear"]["points"].push_back(
        {{"candidates", point.size}, {"seconds", point.seconds}});
    std::printf("  |C|=%-6zu  %.6f s\n", point.size, point.seconds);
  }

  if (!args.skip_baselines) {
    const auto m1 = sert::bench_model1(args.candidate_grid, args.config);
    const auto m1_fit = sert::fit_points(m1);
    std::printf("model1 vs |C|: slope %.3e (expect > 0)\n", m1_fit.slope);
    const auto m2 = sert::bench_model2(args.document_grid, args.config);
    const auto m2_fit = sert::fit_points(m2);
    std::printf("model2 vs |D|: slope %.3e (expect > 0)\n", m2_fit.slope);
    out["model1"] = {{"slope", m1_fit.slope},
                     {"r_squared", m1_fit.r_squared},
                     {"points", json::array()}};
    out["model2"] = {{"slope", m2_fit.slope},
                     {"r_squared", m2_fit.r_squared},
                     {"points", json::array()}};
    for (const auto& point : m1) {
      out["model1"]["points"].push_back(
          {{"candidates", point.size}, {"seconds", point.seconds}});
    }
    for (const auto& point : m2) {
      out["model2"]["points"].push_back(
          {{"documents", point.size}, {"seconds", point.seconds}});
    }
  }

  if (!args.json_path.empty()) {
    write_json_file(out, args.json_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expertise retrieval: log-linear model, generative/vector-space baselines, "
               "evaluation and benchmarking"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic benchmark corpus");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--candidates", synth.base.n_candidates, "number of candidates");
  synth_cmd->add_option("--docs-per-candidate", synth.base.docs_per_candidate,
                        "documents per candidate");
  synth_cmd->add_option("--vocab-per-candidate", synth.base.vocab_per_candidate,
                        "topical vocabulary size per candidate");
  synth_cmd->add_option("--noise", synth.base.noise_rate, "shared-noise token rate [0,1)");
  synth_cmd->add_option("--seed", synth.base.seed, "random seed");
  synth_cmd->add_option("--tokens-per-doc", synth.base.tokens_per_doc, "document length");
  synth_cmd->add_option("--noise-vocab", synth.base.noise_vocab, "shared noise pool size");
  synth_cmd->add_option("--min-query-terms", synth.base.min_query_terms,
                        "minimum query length");
  synth_cmd->add_option("--max-query-terms", synth.base.max_query_terms,
                        "maximum query length");
  synth_cmd->add_option("--topic-skew", synth.base.topic_skew,
                        "Zipf exponent of within-pool token usage (0 = uniform)");
  synth_cmd->add_option("--phrase-stride", synth.base.phrase_query_stride,
                        "every k-th candidate gets a two-token phrase query (0 = none)");
  synth_cmd->add_option("--phrase-occurrences", synth.base.phrase_occurrences,
                        "adjacent plantings of each phrase pair");
  synth_cmd->add_flag("--mixed", synth.mixed,
                      "mixed exact/semantic variant for ensemble experiments");
  synth_cmd->add_option("--synonym-plantings", synth.mixed_options.synonym_plantings,
                        "adjacent synonym-pair plantings (mixed)");
  synth_cmd->add_option("--partner-rate", synth.mixed_options.partner_rate,
                        "doc-side synonym rate (mixed)");
  synth_cmd->add_option("--decoy-docs", synth.mixed_options.decoy_docs_per_candidate,
                        "decoy documents per semantic candidate (mixed)");
  synth_cmd->add_option("--decoy-assoc", synth.mixed_options.decoy_associations,
                        "associations per decoy document (mixed)");
  synth_cmd->add_option("--decoy-rate", synth.mixed_options.decoy_rate,
                        "query-side token rate inside decoys (mixed)");
  synth_cmd->add_option("--exact-occurrences", synth.mixed_options.exact_occurrences,
                        "occurrences of each rare exact token (mixed)");

  IndexArgs index;
  auto* index_cmd = app.add_subcommand("index", "tokenize and encode a JSONL corpus");
  index_cmd->add_option("--corpus", index.corpus_path, "corpus.jsonl path")->required();
  index_cmd->add_option("--out-dir", index.out_dir, "output directory")->required();
  index_cmd->add_option("--vocab-size", index.vocab_size, "vocabulary size limit");
  index_cmd->add_option("--stopwords", index.stopwords, "custom stopword file");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "train the log-linear model");
  train_cmd->add_option("--index-dir", train.index_dir, "directory written by `index`")
      ->required();
  train_cmd->add_option("--model", train.model_path, "output model file")->required();
  train_cmd->add_option("--log", train.log_path, "JSONL per-batch training log");
  train_cmd->add_option("--window", train.config.window, "n-gram width (default 8)");
  train_cmd->add_option("--batch-size", train.config.batch_size,
                        "batch size (default 1024)");
  train_cmd->add_option("--weight-decay", train.config.weight_decay,
                        "L2 penalty (default 0.01)");
  train_cmd->add_option("--rho", train.config.adadelta_rho, "adadelta rho (default 0.95)");
  train_cmd->add_option("--eps", train.config.adadelta_eps, "adadelta eps (default 1e-6)");
  train_cmd->add_option("--epochs", train.config.epochs, "training epochs (default 1)");
  train_cmd->add_flag("--overlapping", train.config.overlapping,
                      "overlapping n-gram extraction");
  train_cmd->add_option("--seed", train.config.seed, "random seed");
  train_cmd->add_option("--embedding-size", train.config.embedding_size,
                        "representation width e (default 300)");
  train_cmd->add_option("--init-embeddings", train.init_embeddings,
                        "pretrained embedding file (token v1..ve per line)");
  train_cmd->add_option("--optimizer", train.optimizer, "adadelta|sgd");
  train_cmd->add_option("--sgd-rate", train.config.sgd_rate, "global SGD rate");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "rank candidates for queries");
  rank_cmd->add_option("--system", rank.system, "loglinear|model1|model2|tfidf");
  rank_cmd->add_option("--model", rank.model_path, "model file (loglinear)");
  rank_cmd->add_option("--index-dir", rank.index_dir, "index directory (baselines)");
  rank_cmd->add_option("--queries", rank.queries_path, "queries.tsv")->required();
  rank_cmd->add_option("--out", rank.out_path, "output TREC run file")->required();
  rank_cmd->add_option("--tag", rank.tag, "run tag (defaults to the system name)");
  rank_cmd->add_option("--smoothing", rank.smoothing, "jm|dirichlet (baselines)");
  rank_cmd->add_option("--lambda", rank.lambda, "Jelinek-Mercer lambda");
  rank_cmd->add_option("--beta", rank.beta, "Dirichlet beta (0 = avg doc length)");
  rank_cmd->add_option("--stopwords", rank.stopwords, "custom stopword file");
  rank_cmd->add_flag("--strict-oov", rank.strict_oov,
                     "fail queries containing out-of-vocabulary terms");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "score a run against qrels");
  eval_cmd->add_option("--run", eval.run_path, "TREC run file")->required();
  eval_cmd->add_option("--qrels", eval.qrels_path, "TREC qrels file")->required();
  eval_cmd->add_option("--json", eval.json_path, "JSON report output");
  eval_cmd->add_flag("--binary-gain", eval.binary_gain, "binary NDCG gains");
  eval_cmd->add_flag("--entropy-correlation", eval.entropy_correlation,
                     "correlate per-query normalized entropy with AP (log-prob runs)");
  eval_cmd->add_option("--permutations", eval.permutations,
                       "permutation samples for the correlation p-value");
  eval_cmd->add_option("--seed", eval.seed, "random seed");

  CompareArgs compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "compare two runs with significance testing");
  compare_cmd->add_option("--run-a", compare.run_a_path, "first run")->required();
  compare_cmd->add_option("--run-b", compare.run_b_path, "second run")->required();
  compare_cmd->add_option("--qrels", compare.qrels_path, "qrels")->required();
  compare_cmd->add_option("--csv", compare.csv_path, "per-topic AP difference CSV");
  compare_cmd->add_option("--json", compare.json_path, "JSON report");
  compare_cmd->add_option("--ensemble-out", compare.ensemble_path,
                          "write the reciprocal-rank ensemble run");
  compare_cmd->add_option("--ensemble-tag", compare.ensemble_tag, "ensemble run tag");
  compare_cmd->add_option("--permutations", compare.permutations,
                          "randomization-test samples (default 100000)");
  compare_cmd->add_option("--seed", compare.seed, "random seed");
  compare_cmd->add_flag("--binary-gain", compare.binary_gain, "binary NDCG gains");

  SweepWindowArgs sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep-window", "train and evaluate across window sizes");
  sweep_cmd->add_option("--index-dir", sweep.index_dir, "index directory")->required();
  sweep_cmd->add_option("--queries", sweep.queries_path, "queries.tsv")->required();
  sweep_cmd->add_option("--qrels", sweep.qrels_path, "qrels")->required();
  sweep_cmd->add_option("--csv", sweep.csv_path, "CSV output (window,map,mrr)");
  sweep_cmd->add_option("--windows", sweep.windows,
                        "window sizes (default 1 2 4 8 16 32)");
  sweep_cmd->add_option("--batch-size", sweep.config.batch_size, "batch size");
  sweep_cmd->add_option("--weight-decay", sweep.config.weight_decay, "L2 penalty");
  sweep_cmd->add_option("--epochs", sweep.config.epochs, "epochs");
  sweep_cmd->add_flag("--overlapping", sweep.config.overlapping, "overlapping n-grams");
  sweep_cmd->add_option("--seed", sweep.config.seed, "random seed");
  sweep_cmd->add_option("--embedding-size", sweep.config.embedding_size, "embedding width");
  sweep_cmd->add_option("--stopwords", sweep.stopwords, "custom stopword file");

  ExpandSweepArgs expand;
  auto* expand_cmd = app.add_subcommand(
      "expand-sweep", "evaluate Model 1 with embedding-based query expansion");
  expand_cmd->add_option("--model", expand.model_path, "trained model file")->required();
  expand_cmd->add_option("--index-dir", expand.index_dir, "index directory")->required();
  expand_cmd->add_option("--queries", expand.queries_path, "queries.tsv")->required();
  expand_cmd->add_option("--qrels", expand.qrels_path, "qrels")->required();
  expand_cmd->add_option("--csv", expand.csv_path, "CSV output (k,map,mrr)");
  expand_cmd->add_option("--ks", expand.ks, "expansion sizes (default 0 1 2 3 5 10)");
  expand_cmd->add_option("--smoothing", expand.smoothing, "jm|dirichlet");
  expand_cmd->add_option("--lambda", expand.lambda, "Jelinek-Mercer lambda");
  expand_cmd->add_option("--beta", expand.beta, "Dirichlet beta (0 = avg doc length)");
  expand_cmd->add_option("--stopwords", expand.stopwords, "custom stopword file");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "inference scaling benchmark");
  bench_cmd->add_option("--candidates", bench.candidate_grid,
                        "candidate-count grid (default 100 200 400 800)");
  bench_cmd->add_option("--documents", bench.document_grid,
                        "document-count grid for model2 (default 500 1000 2000 4000)");
  bench_cmd->add_option("--embedding", bench.config.embedding_size, "embedding width");
  bench_cmd->add_option("--vocab", bench.config.vocab_size, "vocabulary size");
  bench_cmd->add_option("--queries", bench.config.queries, "queries per timing pass");
  bench_cmd->add_option("--terms", bench.config.terms_per_query, "terms per query");
  bench_cmd->add_option("--repeats", bench.config.repeats, "timing repeats (median)");
  bench_cmd->add_option("--seed", bench.config.seed, "random seed");
  bench_cmd->add_option("--json", bench.json_path, "JSON output");
  bench_cmd->add_flag("--skip-baselines", bench.skip_baselines,
                      "only time the log-linear model");

  try {
    app.parse(argc, argv);
    apply_thread_env();

    if (synth_cmd->parsed()) {
      // Shared generator parameters flow into the mixed variant too.
      synth.mixed_options.n_candidates = synth.base.n_candidates;
      synth.mixed_options.docs_per_candidate = synth.base.docs_per_candidate;
      synth.mixed_options.vocab_per_candidate = synth.base.vocab_per_candidate;
      synth.mixed_options.noise_rate = synth.base.noise_rate;
      synth.mixed_options.seed = synth.base.seed;
      synth.mixed_options.tokens_per_doc = synth.base.tokens_per_doc;
      synth.mixed_options.noise_vocab = synth.base.noise_vocab;
      cmd_synth(synth);
    } else if (index_cmd->parsed()) {
      cmd_index(index);
    } else if (train_cmd->parsed()) {
      cmd_train(train);
    } else if (rank_cmd->parsed()) {
      cmd_rank(rank);
    } else if (eval_cmd->parsed()) {
      cmd_eval(eval);
    } else if (compare_cmd->parsed()) {
      cmd_compare(compare);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep_window(sweep);
    } else if (expand_cmd->parsed()) {
      cmd_expand_sweep(expand);
    } else if (bench_cmd->parsed()) {
      cmd_bench(bench);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const sert::FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return 3;
  } catch (const sert::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const sert::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  } catch (const sert::InvalidArgument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
