#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sert/eval.hpp"
#include "sert/rng.hpp"

using namespace sert;

namespace {

std::vector<RunEntry> entries(std::initializer_list<std::string> candidates) {
  std::vector<RunEntry> out;
  double score = static_cast<double>(candidates.size());
  for (const auto& c : candidates) out.push_back({c, score--});
  return out;
}

}  // namespace

TEST_CASE("average precision") {
  SUBCASE("all relevant candidates at the top ranks") {
    const std::map<std::string, int> grades{{"a", 1}, {"b", 1}};
    CHECK(average_precision(entries({"a", "b", "c", "d"}), grades) == doctest::Approx(1.0));
  }
  SUBCASE("single relevant candidate at rank 3") {
    const std::map<std::string, int> grades{{"c", 1}};
    CHECK(average_precision(entries({"a", "b", "c"}), grades) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("relevant at ranks 1 and 4 with R=2") {
    const std::map<std::string, int> grades{{"a", 1}, {"d", 2}};
    CHECK(average_precision(entries({"a", "b", "c", "d"}), grades) ==
          doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("no relevant candidate is a caller error") {
    const std::map<std::string, int> grades{{"a", 0}};
    CHECK_THROWS_AS(average_precision(entries({"a"}), grades), InvalidArgument);
  }
}

TEST_CASE("AP and MRR ignore order below the last relevant candidate") {
  const std::map<std::string, int> grades{{"b", 1}};
  const auto before = entries({"a", "b", "c", "d", "e"});
  const auto after = entries({"a", "b", "e", "d", "c"});
  CHECK(average_precision(before, grades) == average_precision(after, grades));

  Run run_a{{"q", before}};
  Run run_b{{"q", after}};
  const Qrels qrels{{"q", grades}};
  CHECK(metrics(run_a, qrels).aggregate.rr == metrics(run_b, qrels).aggregate.rr);
}

TEST_CASE("metric report over a small run") {
  // 10 retrieved; relevant: 2 in the top 5, 3 in the top 10, first at rank 1.
  Run run{{"q", entries({"r1", "n1", "r2", "n2", "n3", "r3", "n4", "n5", "n6", "n7"})}};
  Qrels qrels{{"q", {{"r1", 1}, {"r2", 1}, {"r3", 1}}}};
  const auto report = metrics(run, qrels);
  CHECK(report.aggregate.rr == doctest::Approx(1.0));
  CHECK(report.aggregate.p5 == doctest::Approx(0.4));
  CHECK(report.aggregate.p10 == doctest::Approx(0.3));
}

TEST_CASE("binary-graded ideal ordering reaches NDCG@100 = 1") {
  Run run{{"q", entries({"a", "b", "c"})}};
  Qrels qrels{{"q", {{"a", 1}, {"b", 1}, {"c", 0}}}};
  CHECK(metrics(run, qrels).aggregate.ndcg100 == doctest::Approx(1.0));
}

TEST_CASE("NDCG self-normalization holds for random graded rankings") {
  Rng rng(63);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(20);
    Qrels qrels;
    std::vector<std::pair<int, std::string>> graded;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string name = "c" + std::to_string(i);
      const int grade = static_cast<int>(rng.below(4));
      qrels["q"][name] = grade;
      graded.emplace_back(grade, name);
    }
    bool any_relevant = false;
    for (const auto& [grade, name] : graded) {
      if (grade > 0) any_relevant = true;
    }
    if (!any_relevant) continue;
    std::sort(graded.begin(), graded.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    Run run;
    double score = static_cast<double>(n);
    for (const auto& [grade, name] : graded) {
      run["q"].push_back({name, score--});
    }
    CHECK(metrics(run, qrels).aggregate.ndcg100 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(metrics(run, qrels, /*binary_gain=*/true).aggregate.ndcg100 ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("metric values stay within [0, 1]") {
  Rng rng(65);
  for (int trial = 0; trial < 50; ++trial) {
    Run run;
    Qrels qrels;
    for (int q = 0; q < 3; ++q) {
      const std::string query = "q" + std::to_string(q);
      std::vector<std::string> names;
      for (int c = 0; c < 12; ++c) names.push_back("c" + std::to_string(c));
      std::vector<std::size_t> order(names.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.shuffle(order);
      double score = 100.0;
      for (auto i : order) run[query].push_back({names[i], score--});
      for (const auto& name : names) {
        qrels[query][name] = static_cast<int>(rng.below(3));
      }
    }
    const auto report = metrics(run, qrels);
    for (const auto& [query, m] : report.per_query) {
      for (double value : {m.ap, m.rr, m.ndcg100, m.p5, m.p10}) {
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
      }
    }
  }
}

TEST_CASE("queries missing from the run score zero; disjoint sets are an error") {
  Run run{{"q1", entries({"a", "b"})}};
  Qrels qrels{{"q1", {{"a", 1}}}, {"q2", {{"b", 1}}}};
  const auto report = metrics(run, qrels);
  CHECK(report.evaluated_queries == 2);
  CHECK(report.per_query.at("q2").ap == 0.0);
  CHECK(report.aggregate.ap == doctest::Approx(0.5));

  Qrels other{{"q9", {{"a", 1}}}};
  CHECK_THROWS_AS(metrics(run, other), InvalidArgument);
}

TEST_CASE("queries without relevant candidates are skipped and counted") {
  Run run{{"q1", entries({"a"})}, {"q2", entries({"a"})}};
  Qrels qrels{{"q1", {{"a", 1}}}, {"q2", {{"a", 0}}}};
  const auto report = metrics(run, qrels);
  CHECK(report.evaluated_queries == 1);
  CHECK(report.skipped_no_relevant == 1);
}

TEST_CASE("randomization test: identical vectors give p = 1") {
  const std::vector<double> a{0.3, 0.5, 0.7, 0.2};
  CHECK(randomization_test(a, a) == doctest::Approx(1.0));
}

TEST_CASE("randomization test: exact enumeration on a hand-checked case") {
  // Q=3, diffs all 1: only the all-keep and all-flip assignments reach
  // |mean| = 1, so p = 2/8.
  const std::vector<double> a{1.0, 1.0, 1.0};
  const std::vector<double> b{0.0, 0.0, 0.0};
  CHECK(randomization_test(a, b) == doctest::Approx(0.25));
}

TEST_CASE("randomization test is symmetric in its arguments") {
  Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(6), b(6);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    CHECK(randomization_test(a, b) == doctest::Approx(randomization_test(b, a)));
  }
}

TEST_CASE("Monte Carlo agrees with itself across seeds within 3 standard errors") {
  Rng rng(69);
  std::vector<double> a(20), b(20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform();
    b[i] = a[i] + rng.uniform(-0.2, 0.25);
  }
  const std::size_t n = 20000;
  const double p1 = randomization_test(a, b, n, 1, RandomizationMode::MonteCarlo);
  const double p2 = randomization_test(a, b, n, 2, RandomizationMode::MonteCarlo);
  const double pooled = (p1 + p2) / 2;
  const double se = std::sqrt(2.0 * pooled * (1 - pooled) / static_cast<double>(n));
  CHECK(std::abs(p1 - p2) <= std::max(3.0 * se, 1e-3));
}

TEST_CASE("exact and Monte Carlo paths agree within Monte Carlo error") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t q = 5 + rng.below(11);  // Q <= 15
    std::vector<double> a(q), b(q);
    for (std::size_t i = 0; i < q; ++i) {
      a[i] = rng.uniform();
      b[i] = a[i] + rng.uniform(-0.3, 0.35);
    }
    const double exact = randomization_test(a, b, 0, 0, RandomizationMode::Exact);
    const std::size_t n = 20000;
    const double mc =
        randomization_test(a, b, n, 7 + trial, RandomizationMode::MonteCarlo);
    const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(n));
    CHECK(std::abs(exact - mc) <= std::max(3.0 * se, 2e-3));
  }
}

TEST_CASE("randomization test input validation") {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{1.0};
  CHECK_THROWS_AS(randomization_test(a, b), InvalidArgument);
  const std::vector<double> single{1.0};
  CHECK_THROWS_AS(randomization_test(single, single), InvalidArgument);
}

TEST_CASE("Benjamini-Hochberg") {
  SUBCASE("single p-value is unchanged") {
    CHECK(benjamini_hochberg({0.037})[0] == doctest::Approx(0.037));
  }
  SUBCASE("worked three-value example") {
    const auto adjusted = benjamini_hochberg({0.01, 0.04, 0.03});
    REQUIRE(adjusted.size() == 3);
    CHECK(adjusted[0] == doctest::Approx(0.03));
    CHECK(adjusted[1] == doctest::Approx(0.04));
    CHECK(adjusted[2] == doctest::Approx(0.04));
  }
  SUBCASE("all ones stay ones") {
    for (double p : benjamini_hochberg({1.0, 1.0, 1.0})) {
      CHECK(p == doctest::Approx(1.0));
    }
  }
  SUBCASE("out-of-range values rejected") {
    CHECK_THROWS_AS(benjamini_hochberg({0.5, 1.2}), InvalidArgument);
    CHECK_THROWS_AS(benjamini_hochberg({-0.1}), InvalidArgument);
  }
}

TEST_CASE("BH output: adjusted >= raw and monotone on sorted input") {
  Rng rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> raw(1 + rng.below(12));
    for (auto& p : raw) p = rng.uniform();
    std::sort(raw.begin(), raw.end());
    const auto adjusted = benjamini_hochberg(raw);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(adjusted[i] >= raw[i] - 1e-15);
      CHECK(adjusted[i] <= 1.0);
      if (i > 0) CHECK(adjusted[i] >= adjusted[i - 1] - 1e-15);
    }
  }
}

TEST_CASE("pearson correlation basics") {
  const std::vector<double> x{0.1, 0.4, 0.5, 0.9};
  CHECK(pearson_correlation(x, x) == doctest::Approx(1.0));
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  CHECK(pearson_correlation(x, neg) == doctest::Approx(-1.0));
  const std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(pearson_correlation(x, flat), NumericError);
}

TEST_CASE("entropy/AP correlation detects a negative relationship") {
  // Handmade run over 2 candidates: confident-and-right queries vs
  // uncertain-and-wrong ones.
  Run run;
  Qrels qrels;
  for (int q = 0; q < 10; ++q) {
    const std::string query = "q" + std::to_string(q);
    const bool confident = q % 2 == 0;
    const double p_top = confident ? 0.999 - 1e-4 * q : 0.52 + 1e-3 * q;
    run[query] = {{"right", std::log(p_top)}, {"wrong", std::log(1.0 - p_top)}};
    qrels[query][confident ? "right" : "wrong"] = 1;
  }
  const auto [r, p] = entropy_ap_correlation(run, qrels, 5000, 3);
  CHECK(r < -0.9);
  CHECK(p < 0.05);
}

TEST_CASE("entropy/AP correlation requires variance and enough queries") {
  Run run;
  Qrels qrels;
  for (int q = 0; q < 4; ++q) {
    const std::string query = "q" + std::to_string(q);
    run[query] = {{"a", std::log(0.9)}, {"b", std::log(0.1)}};
    qrels[query]["a"] = 1;  // every AP = 1 -> zero variance
  }
  CHECK_THROWS_AS(entropy_ap_correlation(run, qrels), NumericError);

  Run tiny{{"q0", {{"a", std::log(0.9)}, {"b", std::log(0.1)}}}};
  Qrels tiny_qrels{{"q0", {{"a", 1}}}};
  CHECK_THROWS_AS(entropy_ap_correlation(tiny, tiny_qrels), InvalidArgument);
}
