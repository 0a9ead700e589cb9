#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sert/trec.hpp"
#include "sert/types.hpp"

namespace sert {

struct QueryMetrics {
  double ap = 0.0;
  double rr = 0.0;
  double ndcg100 = 0.0;
  double p5 = 0.0;
  double p10 = 0.0;
};

struct MetricReport {
  std::map<std::string, QueryMetrics> per_query;
  QueryMetrics aggregate;                 // arithmetic mean over evaluated queries
  std::size_t evaluated_queries = 0;
  std::size_t skipped_no_relevant = 0;    // qrels queries without relevant candidates
};

struct SignificanceResult {
  std::string metric;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_difference = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  std::size_t permutations = 0;
};

/// Average precision with binary relevance (grade > 0); the caller must
/// ensure the query has at least one relevant candidate.
double average_precision(const std::vector<RunEntry>& ranking,
                         const std::map<std::string, int>& qrels_for_query);

/// MAP, MRR, NDCG@100 (gain 2^grade - 1, discount log2(rank+1); binary gain
/// on request), P@5 and P@10. Queries with relevant candidates that are
/// missing from the run score zero; queries without relevant candidates are
/// skipped and counted.
MetricReport metrics(const Run& run, const Qrels& qrels, bool binary_gain = false);

enum class RandomizationMode {
  Auto,        // exact when Q <= 15, Monte Carlo otherwise
  Exact,       // enumerate all 2^Q sign assignments
  MonteCarlo,  // always sample
};

/// Two-tailed paired randomization test on the difference of means. Exact
/// enumeration of all 2^Q sign assignments when Q <= 15, otherwise Monte
/// Carlo with `permutations` samples (the observed assignment is included in
/// the count, so p > 0).
double randomization_test(std::span<const double> per_query_a,
                          std::span<const double> per_query_b,
                          std::size_t permutations = 100000, std::uint64_t seed = 42,
                          RandomizationMode mode = RandomizationMode::Auto);

/// Benjamini-Hochberg step-up adjustment, returned in input order.
std::vector<double> benjamini_hochberg(const std::vector<double>& raw_p);

/// Pearson correlation between per-query normalized entropy (computed from
/// the run's log-probability scores) and average precision, with a
/// two-tailed permutation p-value over shuffled pairings.
std::pair<double, double> entropy_ap_correlation(const Run& run, const Qrels& qrels,
                                                 std::size_t permutations = 10000,
                                                 std::uint64_t seed = 42);

/// Pearson correlation of two equal-length vectors.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace sert
