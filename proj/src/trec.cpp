#include "sert/trec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sert/corpus.hpp"
#include "sert/model.hpp"

namespace sert {

std::vector<RunEntry> to_run_entries(const Ranking& ranking, const CandidateRegistry& registry) {
  std::vector<RunEntry> entries;
  entries.reserve(ranking.entries.size());
  for (const auto& entry : ranking.entries) {
    entries.push_back({registry.name_of(entry.candidate), entry.score});
  }
  return entries;
}

namespace {

void write_run_lines(std::ostream& out, const std::string& query_id,
                     const std::vector<RunEntry>& entries, const std::string& tag) {
  std::size_t rank = 1;
  for (const auto& entry : entries) {
    out << query_id << " Q0 " << entry.candidate << ' ' << rank << ' '
        << std::setprecision(17) << entry.score << ' ' << tag << '\n';
    ++rank;
  }
}

}  // namespace

void write_run(std::ostream& out, const std::vector<Ranking>& rankings,
               const CandidateRegistry& registry, const std::string& tag) {
  for (const auto& ranking : rankings) {
    write_run_lines(out, ranking.query_id, to_run_entries(ranking, registry), tag);
  }
  if (!out) throw IoError("failed writing run");
}

void write_run(const std::string& path, const std::vector<Ranking>& rankings,
               const CandidateRegistry& registry, const std::string& tag) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_run(out, rankings, registry, tag);
}

void write_run(const std::string& path, const Run& run, const std::string& tag) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& [query_id, entries] : run) {
    write_run_lines(out, query_id, entries, tag);
  }
  if (!out) throw IoError("failed writing run: " + path);
}

Run read_run(std::istream& in) {
  Run run;
  std::map<std::string, std::vector<std::pair<std::size_t, RunEntry>>> staged;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string query_id, q0, candidate, tag;
    std::size_t rank = 0;
    double score = 0.0;
    if (!(fields >> query_id >> q0 >> candidate >> rank >> score >> tag)) {
      throw FormatError("run line " + std::to_string(line_no) + " malformed");
    }
    if (!std::isfinite(score)) {
      throw FormatError("run line " + std::to_string(line_no) + " has a non-finite score");
    }
    staged[query_id].emplace_back(rank, RunEntry{candidate, score});
  }
  for (auto& [query_id, entries] : staged) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& out = run[query_id];
    out.reserve(entries.size());
    for (auto& [rank, entry] : entries) {
      out.push_back(std::move(entry));
    }
  }
  return run;
}

Run read_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run file: " + path);
  return read_run(in);
}

void write_qrels(const std::string& path, const Qrels& qrels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& [query_id, grades] : qrels) {
    for (const auto& [candidate, grade] : grades) {
      out << query_id << " 0 " << candidate << ' ' << grade << '\n';
    }
  }
  if (!out) throw IoError("failed writing qrels: " + path);
}

Qrels read_qrels(std::istream& in) {
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string query_id, zero, candidate;
    int grade = 0;
    if (!(fields >> query_id >> zero >> candidate >> grade)) {
      throw FormatError("qrels line " + std::to_string(line_no) + " malformed");
    }
    if (grade < 0) {
      throw FormatError("qrels line " + std::to_string(line_no) + " has a negative grade");
    }
    qrels[query_id][candidate] = grade;
  }
  return qrels;
}

Qrels read_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open qrels file: " + path);
  return read_qrels(in);
}

void write_queries(const std::string& path, const std::vector<Query>& queries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& query : queries) {
    out << query.query_id << '\t' << query.text << '\n';
  }
  if (!out) throw IoError("failed writing queries: " + path);
}

std::vector<Query> read_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open queries file: " + path);
  std::vector<Query> queries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("queries line " + std::to_string(line_no) + ": expected <id>\\t<text>");
    }
    queries.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return queries;
}

}  // namespace sert
