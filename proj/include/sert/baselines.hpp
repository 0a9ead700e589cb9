#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sert/corpus.hpp"
#include "sert/model.hpp"
#include "sert/types.hpp"

namespace sert {

/// Term-count smoothing for the generative baselines.
struct SmoothingSpec {
  enum class Kind { JelinekMercer, Dirichlet };

  Kind kind = Kind::JelinekMercer;
  double lambda = 0.5;               // Jelinek-Mercer interpolation weight
  std::optional<double> beta;        // Dirichlet mass; empty = average doc length

  static SmoothingSpec jelinek_mercer(double lambda = 0.5);
  static SmoothingSpec dirichlet(std::optional<double> beta = std::nullopt);

  void validate() const;
};

/// How document-candidate associations weight evidence in Model 2.
enum class AssociationMode {
  Uniform,  // a(d,c) = 1/|assoc(d)|
  Boolean,  // a(d,c) = 1
};

/// Immutable count tables over an encoded corpus: per-document and collection
/// term counts, document frequencies, and per-candidate profile counts built
/// from the concatenation of each candidate's associated documents.
class CollectionStatistics {
 public:
  static CollectionStatistics build(const std::vector<Document>& documents,
                                    const CandidateRegistry& registry);

  std::size_t document_count() const { return doc_lengths_.size(); }
  std::size_t candidate_count() const { return profile_lengths_.size(); }

  std::uint32_t term_frequency(std::size_t doc, TokenId term) const;
  std::uint32_t document_frequency(TokenId term) const;
  std::uint64_t collection_frequency(TokenId term) const;
  std::uint64_t collection_size() const { return total_tokens_; }
  double collection_probability(TokenId term) const;

  std::uint32_t doc_length(std::size_t doc) const { return doc_lengths_[doc]; }
  double average_doc_length() const;
  const std::string& doc_id(std::size_t doc) const { return doc_ids_[doc]; }
  const std::vector<CandidateId>& associations(std::size_t doc) const { return assoc_[doc]; }

  std::uint64_t profile_frequency(CandidateId candidate, TokenId term) const;
  std::uint64_t profile_length(CandidateId candidate) const {
    return profile_lengths_[candidate];
  }
  const std::unordered_map<TokenId, std::uint64_t>& profile_terms(CandidateId candidate) const {
    return profile_tf_[candidate];
  }

  const std::unordered_map<TokenId, std::uint32_t>& doc_terms(std::size_t doc) const {
    return tf_[doc];
  }

 private:
  std::vector<std::unordered_map<TokenId, std::uint32_t>> tf_;
  std::unordered_map<TokenId, std::uint32_t> df_;
  std::unordered_map<TokenId, std::uint64_t> collection_tf_;
  std::uint64_t total_tokens_ = 0;
  std::vector<std::uint32_t> doc_lengths_;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<CandidateId>> assoc_;
  std::vector<std::unordered_map<TokenId, std::uint64_t>> profile_tf_;
  std::vector<std::uint64_t> profile_lengths_;
};

/// Profile-centric generative ranking: each candidate is a pseudo-document
/// language model over its concatenated associated documents; the score is
/// the smoothed query log-likelihood. Candidates without documents fall back
/// to the collection model.
Ranking model1_rank(const CollectionStatistics& stats, const std::vector<TokenId>& query_terms,
                    const SmoothingSpec& smoothing, const std::string& query_id = "");

/// Document-centric generative ranking: score(c) = sum_d p(q|d) a(d,c),
/// with p(q|d) the smoothed query likelihood of each associated document.
Ranking model2_rank(const CollectionStatistics& stats, const std::vector<TokenId>& query_terms,
                    const SmoothingSpec& smoothing, const std::string& query_id = "",
                    AssociationMode mode = AssociationMode::Uniform);

/// Entity vector space: candidate vectors are sums of their documents'
/// TF-IDF vectors (idf = ln(|D|/df)); scores are cosine similarities against
/// the query's TF-IDF vector. Zero-norm vectors score 0.
Ranking tfidf_rank(const CollectionStatistics& stats, const std::vector<TokenId>& query_terms,
                   const std::string& query_id = "");

/// Multiplicative reciprocal-rank fusion: score(c) = 1/(rank_a(c) rank_b(c))
/// with 1-based ranks. Both rankings must cover the same candidate set.
Ranking ensemble_rank(const Ranking& ranking_a, const Ranking& ranking_b);

/// Augments every query term with its k nearest embedding-space neighbors
/// (uniform weight, duplicates kept) and scores the expanded multiset with
/// model1_rank.
template <class Scalar>
Ranking expanded_query_rank(const LogLinearModel<Scalar>& model,
                            const CollectionStatistics& stats,
                            const std::vector<TokenId>& query_terms, std::size_t k,
                            const SmoothingSpec& smoothing, const std::string& query_id = "") {
  std::vector<TokenId> expanded = query_terms;
  if (k > 0) {
    for (TokenId term : query_terms) {
      for (const auto& neighbor : nearest_term_ids(model, term, k)) {
        expanded.push_back(neighbor.first);
      }
    }
  }
  return model1_rank(stats, expanded, smoothing, query_id);
}

}  // namespace sert
