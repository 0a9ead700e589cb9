#include "sert/eval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sert/model.hpp"
#include "sert/rng.hpp"

namespace sert {

namespace {

std::size_t relevant_count(const std::map<std::string, int>& grades) {
  std::size_t count = 0;
  for (const auto& [candidate, grade] : grades) {
    if (grade > 0) ++count;
  }
  return count;
}

double gain_of(int grade, bool binary_gain) {
  if (binary_gain) return grade > 0 ? 1.0 : 0.0;
  return std::pow(2.0, static_cast<double>(grade)) - 1.0;
}

QueryMetrics score_query(const std::vector<RunEntry>& entries,
                         const std::map<std::string, int>& grades, bool binary_gain) {
  QueryMetrics m;

  const std::size_t relevant = relevant_count(grades);
  std::size_t seen_relevant = 0;
  double ap_sum = 0.0;
  double dcg = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::size_t rank = i + 1;
    auto it = grades.find(entries[i].candidate);
    const int grade = it == grades.end() ? 0 : it->second;
    if (grade > 0) {
      ++seen_relevant;
      ap_sum += static_cast<double>(seen_relevant) / static_cast<double>(rank);
      if (m.rr == 0.0) m.rr = 1.0 / static_cast<double>(rank);
      if (rank <= 5) m.p5 += 1.0;
      if (rank <= 10) m.p10 += 1.0;
    }
    if (rank <= 100 && grade > 0) {
      dcg += gain_of(grade, binary_gain) / std::log2(static_cast<double>(rank) + 1.0);
    }
  }
  m.ap = ap_sum / static_cast<double>(relevant);
  m.p5 /= 5.0;
  m.p10 /= 10.0;

  std::vector<int> ideal;
  ideal.reserve(grades.size());
  for (const auto& [candidate, grade] : grades) {
    if (grade > 0) ideal.push_back(grade);
  }
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < 100; ++i) {
    idcg += gain_of(ideal[i], binary_gain) / std::log2(static_cast<double>(i) + 2.0);
  }
  m.ndcg100 = idcg > 0.0 ? dcg / idcg : 0.0;
  return m;
}

}  // namespace

double average_precision(const std::vector<RunEntry>& ranking,
                         const std::map<std::string, int>& qrels_for_query) {
  if (relevant_count(qrels_for_query) == 0) {
    throw InvalidArgument("average precision needs at least one relevant candidate");
  }
  return score_query(ranking, qrels_for_query, true).ap;
}

MetricReport metrics(const Run& run, const Qrels& qrels, bool binary_gain) {
  bool shared_query = false;
  for (const auto& [query_id, grades] : qrels) {
    if (run.contains(query_id)) {
      shared_query = true;
      break;
    }
  }
  if (!shared_query) {
    throw InvalidArgument("run and qrels have disjoint query sets");
  }

  MetricReport report;
  double ap = 0, rr = 0, ndcg = 0, p5 = 0, p10 = 0;
  for (const auto& [query_id, grades] : qrels) {
    if (relevant_count(grades) == 0) {
      ++report.skipped_no_relevant;
      continue;
    }
    QueryMetrics m;
    auto it = run.find(query_id);
    if (it != run.end()) {
      m = score_query(it->second, grades, binary_gain);
    }
    ap += m.ap;
    rr += m.rr;
    ndcg += m.ndcg100;
    p5 += m.p5;
    p10 += m.p10;
    report.per_query.emplace(query_id, m);
    ++report.evaluated_queries;
  }
  if (report.evaluated_queries == 0) {
    throw InvalidArgument("qrels contain no queries with relevant candidates");
  }
  const double n = static_cast<double>(report.evaluated_queries);
  report.aggregate = {ap / n, rr / n, ndcg / n, p5 / n, p10 / n};
  return report;
}

double randomization_test(std::span<const double> per_query_a,
                          std::span<const double> per_query_b, std::size_t permutations,
                          std::uint64_t seed, RandomizationMode mode) {
  if (per_query_a.size() != per_query_b.size()) {
    throw InvalidArgument("paired vectors differ in length");
  }
  const std::size_t q = per_query_a.size();
  if (q < 2) {
    throw InvalidArgument("randomization test needs at least two pairs");
  }
  if (mode == RandomizationMode::Exact && q > 30) {
    throw InvalidArgument("exact enumeration limited to 30 pairs");
  }

  std::vector<double> diffs(q);
  double observed = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    diffs[i] = per_query_a[i] - per_query_b[i];
    observed += diffs[i];
  }
  observed = std::abs(observed / static_cast<double>(q));
  // Counting uses a small slack so sign flips of the observed assignment
  // itself always tie with it.
  const double threshold = observed - 1e-12;

  const bool exact =
      mode == RandomizationMode::Exact || (mode == RandomizationMode::Auto && q <= 15);
  if (exact) {
    const std::uint64_t assignments = std::uint64_t{1} << q;
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < assignments; ++mask) {
      double sum = 0.0;
      for (std::size_t i = 0; i < q; ++i) {
        sum += (mask >> i) & 1 ? -diffs[i] : diffs[i];
      }
      if (std::abs(sum / static_cast<double>(q)) >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(assignments);
  }

  if (permutations == 0) {
    throw InvalidArgument("Monte Carlo mode needs permutations >= 1");
  }
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < permutations; ++s) {
    double sum = 0.0;
    std::uint64_t bits = 0;
    int available = 0;
    for (std::size_t i = 0; i < q; ++i) {
      if (available == 0) {
        bits = rng.next_u64();
        available = 64;
      }
      sum += bits & 1 ? -diffs[i] : diffs[i];
      bits >>= 1;
      --available;
    }
    if (std::abs(sum / static_cast<double>(q)) >= threshold) ++hits;
  }
  // The observed assignment counts as one more sample.
  return static_cast<double>(hits + 1) / static_cast<double>(permutations + 1);
}

std::vector<double> benjamini_hochberg(const std::vector<double>& raw_p) {
  const std::size_t m = raw_p.size();
  for (double p : raw_p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("p-values must lie in [0, 1]");
    }
  }
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return raw_p[a] < raw_p[b]; });

  std::vector<double> adjusted(m, 0.0);
  double running_min = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double scaled =
        raw_p[order[i]] * static_cast<double>(m) / static_cast<double>(i + 1);
    running_min = std::min(running_min, std::min(scaled, 1.0));
    adjusted[order[i]] = running_min;
  }
  return adjusted;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("correlation needs two equal-length vectors of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw NumericError("correlation undefined: zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::pair<double, double> entropy_ap_correlation(const Run& run, const Qrels& qrels,
                                                 std::size_t permutations,
                                                 std::uint64_t seed) {
  std::vector<double> entropies;
  std::vector<double> aps;
  for (const auto& [query_id, entries] : run) {
    auto it = qrels.find(query_id);
    if (it == qrels.end() || relevant_count(it->second) == 0) continue;
    if (entries.size() < 2) continue;
    Eigen::VectorXd scores(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      scores[static_cast<Eigen::Index>(i)] = entries[i].score;
    }
    entropies.push_back(normalized_entropy_from_scores(scores));
    aps.push_back(average_precision(entries, it->second));
  }
  if (entropies.size() < 3) {
    throw InvalidArgument("entropy/AP correlation needs at least three judged queries");
  }

  const double r = pearson_correlation(entropies, aps);
  const double observed = std::abs(r) - 1e-12;

  Rng rng(seed);
  std::vector<double> shuffled = aps;
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < permutations; ++s) {
    rng.shuffle(shuffled);
    if (std::abs(pearson_correlation(entropies, shuffled)) >= observed) ++hits;
  }
  const double p = static_cast<double>(hits + 1) / static_cast<double>(permutations + 1);
  return {r, p};
}

}  // namespace sert
