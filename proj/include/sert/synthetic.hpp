#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sert/corpus.hpp"
#include "sert/trec.hpp"

namespace sert {

/// Deterministic benchmark stand-in: every candidate owns a disjoint topical
/// vocabulary, documents mix topical tokens with shared noise tokens, and
/// each candidate gets one topic query (with itself as the only relevant
/// candidate in the qrels).
struct SyntheticOptions {
  std::size_t n_candidates = 20;
  std::size_t docs_per_candidate = 30;
  std::size_t vocab_per_candidate = 40;
  double noise_rate = 0.3;
  std::uint64_t seed = 42;

  std::size_t tokens_per_doc = 300;
  std::size_t noise_vocab = 120;
  // Query lengths are drawn uniformly from this range, giving queries of
  // varying specificity.
  std::size_t min_query_terms = 1;
  std::size_t max_query_terms = 6;
  // Zipf exponent for within-pool token usage. Documents draw topical tokens
  // with probability proportional to 1/rank^topic_skew (every pool token is
  // guaranteed at least one occurrence), while queries sample the pool
  // uniformly, so some queries probe rarely-observed vocabulary. 0 = uniform.
  double topic_skew = 1.2;
  // Every phrase_query_stride-th candidate is queried by a specific
  // two-token phrase instead: a pair of pool tokens that only ever occurs as
  // adjacent plantings in the candidate's documents. Such queries are only
  // answerable when training windows capture the pair jointly (n >= 2).
  // 0 disables phrase queries.
  std::size_t phrase_query_stride = 5;
  std::size_t phrase_occurrences = 8;

  void validate() const;
};

struct SyntheticCorpus {
  std::vector<RawDocument> documents;
  std::vector<std::string> candidates;
  std::vector<Query> queries;
  Qrels qrels;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options);
SyntheticCorpus generate_synthetic_corpus(std::size_t n_candidates,
                                          std::size_t docs_per_candidate,
                                          std::size_t vocab_per_candidate, double noise_rate,
                                          std::uint64_t seed);

/// Variant with complementary query populations.
///
/// The first half of the candidates ("semantic") are queried by the query
/// side of a synonym pair: it occurs in the owner's documents only as
/// adjacent plantings next to its frequent partner token (pure windows the
/// log-linear model learns from), while high-frequency decoy documents with
/// diffuse associations hand exact matchers stronger term counts elsewhere.
/// The second half ("exact") are queried by a rare token confined to a few
/// of the owner's documents: a single unambiguous evidence path that term
/// counting resolves instantly but that offers little gradient signal.
struct MixedSyntheticOptions {
  std::size_t n_candidates = 20;  // even; half semantic, half exact
  std::size_t docs_per_candidate = 30;
  std::size_t vocab_per_candidate = 40;
  double noise_rate = 0.3;
  std::uint64_t seed = 42;

  std::size_t tokens_per_doc = 300;
  std::size_t noise_vocab = 120;
  double partner_rate = 0.15;       // doc-side synonym share of topical slots
  std::size_t synonym_plantings = 24;  // adjacent [query-side, doc-side] pairs
  std::size_t decoy_docs_per_candidate = 3;
  std::size_t decoy_associations = 6;  // random candidates, never the owner
  double decoy_rate = 0.5;             // query-side share of decoy topical slots
  std::size_t exact_occurrences = 12;  // total plantings of each unique token

  void validate() const;
};

SyntheticCorpus generate_mixed_synthetic_corpus(const MixedSyntheticOptions& options);

/// True for query ids of the semantic half of a mixed corpus.
inline bool is_semantic_query(const std::string& query_id) {
  return query_id.starts_with("qsem");
}

}  // namespace sert
