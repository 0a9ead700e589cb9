#include "sert/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sert/baselines.hpp"
#include "sert/model.hpp"
#include "sert/rng.hpp"
#include "sert/training.hpp"

namespace sert {

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("linear fit needs at least two points");
  }
  const double n = static_cast<double>(x.size());
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw NumericError("linear fit undefined: constant x");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double predicted = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - predicted) * (y[i] - predicted);
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

LinearFit fit_points(const std::vector<BenchPoint>& points) {
  std::vector<double> x, y;
  for (const auto& point : points) {
    x.push_back(static_cast<double>(point.size));
    y.push_back(point.seconds);
  }
  return fit_linear(x, y);
}

namespace {

Vocabulary bench_vocabulary(std::size_t size) {
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i + Vocabulary::kReservedCount < size; ++i) {
    counts["w" + std::to_string(100000 + i)] = size - i;
  }
  return Vocabulary::from_counts(counts, size);
}

CandidateRegistry bench_registry(std::size_t size) {
  CandidateRegistry registry;
  for (std::size_t c = 0; c < size; ++c) registry.add("cand" + std::to_string(c));
  return registry;
}

std::vector<std::vector<TokenId>> bench_queries(const BenchConfig& config, Rng& rng) {
  std::vector<std::vector<TokenId>> queries(config.queries);
  for (auto& query : queries) {
    query.resize(config.terms_per_query);
    for (auto& term : query) {
      term = static_cast<TokenId>(Vocabulary::kReservedCount +
                                  rng.below(config.vocab_size - Vocabulary::kReservedCount));
    }
  }
  return queries;
}

/// Median over `repeats` timings of `body()`; the sink defeats dead-code
/// elimination.
template <class Body>
double median_seconds(std::size_t repeats, Body&& body) {
  std::vector<double> times;
  times.reserve(repeats);
  double sink = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    sink += body();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  if (!std::isfinite(sink)) {
    throw NumericError("benchmark produced non-finite scores");
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

std::vector<Document> bench_documents(std::size_t documents, std::size_t candidates,
                                      const BenchConfig& config, Rng& rng) {
  std::vector<Document> docs(documents);
  for (std::size_t d = 0; d < documents; ++d) {
    docs[d].doc_id = "d" + std::to_string(d);
    docs[d].tokens.resize(config.doc_length);
    for (auto& token : docs[d].tokens) {
      token = static_cast<TokenId>(Vocabulary::kReservedCount +
                                   rng.below(config.vocab_size - Vocabulary::kReservedCount));
    }
    docs[d].associations = {static_cast<CandidateId>(d % candidates)};
  }
  return docs;
}

}  // namespace

std::vector<BenchPoint> bench_loglinear_rank(const std::vector<std::size_t>& candidate_grid,
                                             const BenchConfig& config) {
  Rng rng(config.seed);
  const auto vocab = bench_vocabulary(config.vocab_size);
  const auto queries = bench_queries(config, rng);

  std::vector<BenchPoint> points;
  for (std::size_t candidates : candidate_grid) {
    auto [model, state] =
        initialize<float>(vocab, bench_registry(candidates), config.embedding_size,
                          config.seed);
    const double seconds = median_seconds(config.repeats, [&] {
      double sink = 0.0;
      for (const auto& query : queries) {
        const auto dist = sequence_distribution(model, query);
        sink += dist.log_probs[0];
      }
      return sink;
    });
    points.push_back({candidates, seconds});
  }
  return points;
}

std::vector<BenchPoint> bench_model1(const std::vector<std::size_t>& candidate_grid,
                                     const BenchConfig& config) {
  Rng rng(config.seed + 1);
  const auto queries = bench_queries(config, rng);

  std::vector<BenchPoint> points;
  for (std::size_t candidates : candidate_grid) {
    const auto registry = bench_registry(candidates);
    const auto docs = bench_documents(config.documents, candidates, config, rng);
    const auto stats = CollectionStatistics::build(docs, registry);
    const auto smoothing = SmoothingSpec::jelinek_mercer(0.5);
    const double seconds = median_seconds(config.repeats, [&] {
      double sink = 0.0;
      for (const auto& query : queries) {
        sink += model1_rank(stats, query, smoothing).entries[0].score;
      }
      return sink;
    });
    points.push_back({candidates, seconds});
  }
  return points;
}

std::vector<BenchPoint> bench_model2(const std::vector<std::size_t>& document_grid,
                                     const BenchConfig& config) {
  Rng rng(config.seed + 2);
  const auto queries = bench_queries(config, rng);

  std::vector<BenchPoint> points;
  for (std::size_t documents : document_grid) {
    const auto registry = bench_registry(config.candidates);
    const auto docs = bench_documents(documents, config.candidates, config, rng);
    const auto stats = CollectionStatistics::build(docs, registry);
    const auto smoothing = SmoothingSpec::jelinek_mercer(0.5);
    const double seconds = median_seconds(config.repeats, [&] {
      double sink = 0.0;
      for (const auto& query : queries) {
        sink += model2_rank(stats, query, smoothing).entries[0].score;
      }
      return sink;
    });
    points.push_back({documents, seconds});
  }
  return points;
}

}  // namespace sert
