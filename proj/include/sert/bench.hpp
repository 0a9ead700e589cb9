#pragma once

#include <cstdint>
#include <vector>

#include "sert/types.hpp"

namespace sert {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct BenchPoint {
  std::size_t size = 0;     // the swept dimension (|C| or |D|)
  double seconds = 0.0;     // median wall-clock time for one full query sweep
};

struct BenchConfig {
  std::size_t embedding_size = 128;
  std::size_t vocab_size = 2000;
  std::size_t queries = 200;
  std::size_t terms_per_query = 4;
  std::size_t repeats = 5;
  std::uint64_t seed = 42;
  // Collection shape for the generative baselines.
  std::size_t documents = 1500;
  std::size_t candidates = 100;
  std::size_t doc_length = 60;
};

/// Times log-linear rank() over a grid of candidate counts at fixed e, |V|.
std::vector<BenchPoint> bench_loglinear_rank(const std::vector<std::size_t>& candidate_grid,
                                             const BenchConfig& config);

/// Times model1_rank over a grid of candidate counts (|D| fixed).
std::vector<BenchPoint> bench_model1(const std::vector<std::size_t>& candidate_grid,
                                     const BenchConfig& config);

/// Times model2_rank over a grid of document counts (|C| fixed).
std::vector<BenchPoint> bench_model2(const std::vector<std::size_t>& document_grid,
                                     const BenchConfig& config);

LinearFit fit_points(const std::vector<BenchPoint>& points);

}  // namespace sert
