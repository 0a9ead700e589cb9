#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sert/types.hpp"

namespace sert {

class CandidateRegistry;
struct Ranking;

/// query id -> (candidate id -> relevance grade >= 0).
using Qrels = std::map<std::string, std::map<std::string, int>>;

struct RunEntry {
  std::string candidate;
  double score = 0.0;
};

/// query id -> candidates in rank order.
using Run = std::map<std::string, std::vector<RunEntry>>;

struct Query {
  std::string query_id;
  std::string text;
};

/// TREC run lines: `<query_id> Q0 <candidate_id> <rank> <score> <tag>`.
void write_run(std::ostream& out, const std::vector<Ranking>& rankings,
               const CandidateRegistry& registry, const std::string& tag);
void write_run(const std::string& path, const std::vector<Ranking>& rankings,
               const CandidateRegistry& registry, const std::string& tag);
void write_run(const std::string& path, const Run& run, const std::string& tag);
Run read_run(std::istream& in);
Run read_run(const std::string& path);

/// TREC qrels lines: `<query_id> 0 <candidate_id> <relevance>`.
void write_qrels(const std::string& path, const Qrels& qrels);
Qrels read_qrels(std::istream& in);
Qrels read_qrels(const std::string& path);

/// Tab-separated queries: `<query_id>\t<text>`.
void write_queries(const std::string& path, const std::vector<Query>& queries);
std::vector<Query> read_queries(const std::string& path);

/// Converts a dense-id ranking into the string-keyed run representation.
std::vector<RunEntry> to_run_entries(const Ranking& ranking, const CandidateRegistry& registry);

}  // namespace sert
