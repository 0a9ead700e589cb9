#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sert/corpus.hpp"
#include "sert/model.hpp"
#include "sert/rng.hpp"
#include "sert/trec.hpp"

using namespace sert;

TEST_CASE("run files round-trip") {
  CandidateRegistry registry;
  registry.add("alice");
  registry.add("bob");
  registry.add("carol");

  std::vector<Ranking> rankings;
  rankings.push_back({"q1", {{2, 0.5}, {0, -1.25}, {1, -3.5}}});
  rankings.push_back({"q2", {{1, 0.125}, {2, 0.0625}, {0, -0.875}}});
  write_run("run_roundtrip.txt", rankings, registry, "testtag");

  const auto run = read_run("run_roundtrip.txt");
  REQUIRE(run.size() == 2);
  const auto& q1 = run.at("q1");
  REQUIRE(q1.size() == 3);
  CHECK(q1[0].candidate == "carol");
  CHECK(q1[0].score == 0.5);
  CHECK(q1[1].candidate == "alice");
  CHECK(q1[2].candidate == "bob");
}

TEST_CASE("run entries are ordered by the rank field") {
  std::istringstream in("q1 Q0 b 2 0.5 tag\nq1 Q0 a 1 0.9 tag\n");
  const auto run = read_run(in);
  const auto& entries = run.at("q1");
  CHECK(entries[0].candidate == "a");
  CHECK(entries[1].candidate == "b");
}

TEST_CASE("malformed run lines carry their line number") {
  std::istringstream in("q1 Q0 a 1 0.9 tag\nq1 Q0 broken\n");
  try {
    read_run(in);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("qrels round-trip and validation") {
  Qrels qrels{{"q1", {{"alice", 2}, {"bob", 0}}}, {"q2", {{"carol", 1}}}};
  write_qrels("qrels_roundtrip.txt", qrels);
  CHECK(read_qrels("qrels_roundtrip.txt") == qrels);

  std::istringstream negative("q1 0 alice -2\n");
  CHECK_THROWS_AS(read_qrels(negative), FormatError);
  std::istringstream malformed("q1 0\n");
  CHECK_THROWS_AS(read_qrels(malformed), FormatError);
}

TEST_CASE("queries round-trip including spaces in text") {
  const std::vector<Query> queries{{"q1", "semantic web coordination"},
                                   {"q2", "xml parser"}};
  write_queries("queries_roundtrip.tsv", queries);
  const auto reloaded = read_queries("queries_roundtrip.tsv");
  REQUIRE(reloaded.size() == 2);
  CHECK(reloaded[0].query_id == "q1");
  CHECK(reloaded[0].text == "semantic web coordination");
  CHECK(reloaded[1].text == "xml parser");

  std::ofstream out("queries_bad.tsv");
  out << "no-tab-here\n";
  out.close();
  CHECK_THROWS_AS(read_queries("queries_bad.tsv"), FormatError);
}

TEST_CASE("run scores survive the text round-trip at full precision") {
  CandidateRegistry registry;
  registry.add("a");
  registry.add("b");
  Rng rng(77);
  std::vector<Ranking> rankings;
  Ranking ranking{"q", {}};
  ranking.entries.push_back({0, std::log(rng.uniform())});
  ranking.entries.push_back({1, std::log(rng.uniform()) - 20.0});
  rankings.push_back(ranking);
  write_run("run_precision.txt", rankings, registry, "tag");
  const auto run = read_run("run_precision.txt");
  CHECK(run.at("q")[0].score == ranking.entries[0].score);
  CHECK(run.at("q")[1].score == ranking.entries[1].score);
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(read_run("nope_run.txt"), IoError);
  CHECK_THROWS_AS(read_qrels("nope_qrels.txt"), IoError);
  CHECK_THROWS_AS(read_queries("nope_queries.tsv"), IoError);
}
