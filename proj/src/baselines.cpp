#include "sert/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace sert {

SmoothingSpec SmoothingSpec::jelinek_mercer(double lambda) {
  SmoothingSpec spec;
  spec.kind = Kind::JelinekMercer;
  spec.lambda = lambda;
  spec.validate();
  return spec;
}

SmoothingSpec SmoothingSpec::dirichlet(std::optional<double> beta) {
  SmoothingSpec spec;
  spec.kind = Kind::Dirichlet;
  spec.beta = beta;
  spec.validate();
  return spec;
}

void SmoothingSpec::validate() const {
  if (kind == Kind::JelinekMercer && (lambda < 0.0 || lambda > 1.0)) {
    throw InvalidArgument("Jelinek-Mercer lambda must be in [0, 1]");
  }
  if (kind == Kind::Dirichlet && beta && *beta <= 0.0) {
    throw InvalidArgument("Dirichlet beta must be > 0");
  }
}

CollectionStatistics CollectionStatistics::build(const std::vector<Document>& documents,
                                                 const CandidateRegistry& registry) {
  CollectionStatistics stats;
  const std::size_t docs = documents.size();
  stats.tf_.resize(docs);
  stats.doc_lengths_.resize(docs);
  stats.doc_ids_.resize(docs);
  stats.assoc_.resize(docs);
  stats.profile_tf_.resize(registry.size());
  stats.profile_lengths_.assign(registry.size(), 0);

  for (std::size_t d = 0; d < docs; ++d) {
    const Document& doc = documents[d];
    stats.doc_ids_[d] = doc.doc_id;
    stats.doc_lengths_[d] = static_cast<std::uint32_t>(doc.tokens.size());
    stats.assoc_[d] = doc.associations;
    for (CandidateId c : doc.associations) {
      if (c >= registry.size()) {
        throw InvalidArgument("document association outside registry: " + doc.doc_id);
      }
    }
    auto& counts = stats.tf_[d];
    for (TokenId token : doc.tokens) {
      ++counts[token];
    }
    stats.total_tokens_ += doc.tokens.size();
    for (const auto& [term, count] : counts) {
      ++stats.df_[term];
      stats.collection_tf_[term] += count;
    }
    for (CandidateId c : doc.associations) {
      for (const auto& [term, count] : counts) {
        stats.profile_tf_[c][term] += count;
      }
      stats.profile_lengths_[c] += doc.tokens.size();
    }
  }
  return stats;
}

std::uint32_t CollectionStatistics::term_frequency(std::size_t doc, TokenId term) const {
  const auto& counts = tf_[doc];
  auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

std::uint32_t CollectionStatistics::document_frequency(TokenId term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

std::uint64_t CollectionStatistics::collection_frequency(TokenId term) const {
  auto it = collection_tf_.find(term);
  return it == collection_tf_.end() ? 0 : it->second;
}

double CollectionStatistics::collection_probability(TokenId term) const {
  if (total_tokens_ == 0) return 0.0;
  return static_cast<double>(collection_frequency(term)) /
         static_cast<double>(total_tokens_);
}

double CollectionStatistics::average_doc_length() const {
  if (doc_lengths_.empty()) return 0.0;
  return static_cast<double>(total_tokens_) / static_cast<double>(doc_lengths_.size());
}

std::uint64_t CollectionStatistics::profile_frequency(CandidateId candidate,
                                                      TokenId term) const {
  const auto& counts = profile_tf_[candidate];
  auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

namespace {

Ranking sorted_ranking(std::string query_id, std::vector<double> scores) {
  Ranking ranking;
  ranking.query_id = std::move(query_id);
  ranking.entries.reserve(scores.size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    ranking.entries.push_back({static_cast<CandidateId>(c), scores[c]});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const RankingEntry& a, const RankingEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.candidate < b.candidate;
            });
  return ranking;
}

/// Drops query terms absent from the collection; errors out when none left.
std::vector<TokenId> usable_terms(const CollectionStatistics& stats,
                                  const std::vector<TokenId>& query_terms) {
  std::vector<TokenId> usable;
  usable.reserve(query_terms.size());
  for (TokenId term : query_terms) {
    if (stats.document_frequency(term) > 0) usable.push_back(term);
  }
  if (usable.empty()) {
    throw EmptyQueryError("no query term occurs in the collection");
  }
  return usable;
}

double resolve_beta(const SmoothingSpec& smoothing, const CollectionStatistics& stats) {
  const double beta = smoothing.beta.value_or(stats.average_doc_length());
  if (beta <= 0.0) {
    throw InvalidArgument("Dirichlet beta resolved to a non-positive value");
  }
  return beta;
}

double smoothed_probability(const SmoothingSpec& smoothing, double beta, std::uint64_t tf,
                            std::uint64_t length, double collection_prob) {
  if (smoothing.kind == SmoothingSpec::Kind::JelinekMercer) {
    const double ml = length > 0 ? static_cast<double>(tf) / static_cast<double>(length) : 0.0;
    return (1.0 - smoothing.lambda) * ml + smoothing.lambda * collection_prob;
  }
  return (static_cast<double>(tf) + beta * collection_prob) /
         (static_cast<double>(length) + beta);
}

}  // namespace

Ranking model1_rank(const CollectionStatistics& stats, const std::vector<TokenId>& query_terms,
                    const SmoothingSpec& smoothing, const std::string& query_id) {
  smoothing.validate();
  const auto terms = usable_terms(stats, query_terms);
  const double beta = resolve_beta(smoothing, stats);

  std::vector<double> scores(stats.candidate_count(), 0.0);
  for (std::size_t c = 0; c < stats.candidate_count(); ++c) {
    const auto candidate = static_cast<CandidateId>(c);
    double score = 0.0;
    for (TokenId term : terms) {
      score += std::log(smoothed_probability(smoothing, beta,
                                             stats.profile_frequency(candidate, term),
                                             stats.profile_length(candidate),
                                             stats.collection_probability(term)));
    }
    scores[c] = score;
  }
  return sorted_ranking(query_id, std::move(scores));
}

Ranking model2_rank(const CollectionStatistics& stats, const std::vector<TokenId>& query_terms,
                    const SmoothingSpec& smoothing, const std::string& query_id,
                    AssociationMode mode) {
  smoothing.validate();
  const auto terms = usable_terms(stats, query_terms);
  const double beta = resolve_beta(smoothing, stats);

  std::vector<double> scores(stats.candidate_count(), 0.0);
  for (std::size_t d = 0; d < stats.document_count(); ++d) {
    const auto& assoc = stats.associations(d);
    if (assoc.empty()) continue;
    double log_likelihood = 0.0;
    for (TokenId term : terms) {
      log_likelihood += std::log(smoothed_probability(smoothing, beta,
                                                      stats.term_frequency(d, term),
                                                      stats.doc_length(d),
                                                      stats.collection_probability(term)));
    }
    const double likelihood = std::exp(log_likelihood);
    const double weight =
        mode == AssociationMode::Uniform ? 1.0 / static_cast<double>(assoc.size()) : 1.0;
    for (CandidateId c : assoc) {
      scores[c] += likelihood * weight;
    }
  }
  return sorted_ranking(query_id, std::move(scores));
}

Ranking tfidf_rank(const CollectionStatistics& stats, const std::vector<TokenId>& query_terms,
                   const std::string& query_id) {
  const auto terms = usable_terms(stats, query_terms);
  const double doc_count = static_cast<double>(stats.document_count());

  auto idf = [&](TokenId term) {
    return std::log(doc_count / static_cast<double>(stats.document_frequency(term)));
  };

  std::unordered_map<TokenId, double> query_vector;
  for (TokenId term : terms) {
    query_vector[term] += 1.0;
  }
  double query_sq = 0.0;
  for (auto& [term, weight] : query_vector) {
    weight *= idf(term);
    query_sq += weight * weight;
  }
  const double query_norm = std::sqrt(query_sq);

  std::vector<double> scores(stats.candidate_count(), 0.0);
  if (query_norm > 0.0) {
    // Candidate vectors are accumulated lazily: dot products and norms only
    // need per-profile counts.
    for (std::size_t c = 0; c < stats.candidate_count(); ++c) {
      const auto candidate = static_cast<CandidateId>(c);
      double dot = 0.0;
      for (const auto& [term, weight] : query_vector) {
        dot += weight * static_cast<double>(stats.profile_frequency(candidate, term)) *
               idf(term);
      }
      if (dot == 0.0) continue;
      double norm_sq = 0.0;
      for (const auto& [term, count] : stats.profile_terms(candidate)) {
        const double w = static_cast<double>(count) * idf(term);
        norm_sq += w * w;
      }
      if (norm_sq > 0.0) {
        scores[c] = dot / (std::sqrt(norm_sq) * query_norm);
      }
    }
  }
  return sorted_ranking(query_id, std::move(scores));
}

Ranking ensemble_rank(const Ranking& ranking_a, const Ranking& ranking_b) {
  if (ranking_a.entries.size() != ranking_b.entries.size()) {
    throw InvalidArgument("ensemble inputs rank different candidate sets");
  }
  std::unordered_map<CandidateId, std::size_t> rank_b;
  rank_b.reserve(ranking_b.entries.size());
  for (std::size_t i = 0; i < ranking_b.entries.size(); ++i) {
    rank_b.emplace(ranking_b.entries[i].candidate, i + 1);
  }

  Ranking ensemble;
  ensemble.query_id = ranking_a.query_id;
  ensemble.entries.reserve(ranking_a.entries.size());
  for (std::size_t i = 0; i < ranking_a.entries.size(); ++i) {
    const CandidateId candidate = ranking_a.entries[i].candidate;
    auto it = rank_b.find(candidate);
    if (it == rank_b.end()) {
      throw InvalidArgument("ensemble inputs rank different candidate sets");
    }
    const double score =
        1.0 / (static_cast<double>(i + 1) * static_cast<double>(it->second));
    ensemble.entries.push_back({candidate, score});
  }
  std::sort(ensemble.entries.begin(), ensemble.entries.end(),
            [](const RankingEntry& a, const RankingEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.candidate < b.candidate;
            });
  return ensemble;
}

}  // namespace sert
