#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sert/corpus.hpp"
#include "sert/tokenizer.hpp"
#include "sert/types.hpp"
#include "sert/vocabulary.hpp"

namespace sert {

/// Candidate scores as natural-log probabilities; exp(log_probs) sums to 1.
struct CandidateDistribution {
  Eigen::VectorXd log_probs;
};

struct RankingEntry {
  CandidateId candidate = 0;
  double score = 0.0;
};

/// Candidates ordered by score descending, ties by candidate id ascending.
struct Ranking {
  std::string query_id;
  std::vector<RankingEntry> entries;
};

/// The log-linear retrieval model: a word projection whose columns are word
/// embeddings, a candidate representation matrix and a candidate bias.
/// P(c | w) = softmax(candidate_weights * word_projection[:, w] + bias);
/// a word sequence scores as the renormalized product of its per-word
/// distributions, computed here as a softmax over summed logits.
///
/// Storage precision is the template parameter; distributions and scores are
/// always computed with double accumulation.
template <class Scalar>
struct LogLinearModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix word_projection;    // e x |V|
  Matrix candidate_weights;  // |C| x e
  Vector bias;               // |C|
  Vocabulary vocabulary;
  CandidateRegistry registry;

  Eigen::Index embedding_size() const { return word_projection.rows(); }
  Eigen::Index vocab_size() const { return word_projection.cols(); }
  Eigen::Index candidate_count() const { return candidate_weights.rows(); }

  bool all_finite() const {
    return word_projection.allFinite() && candidate_weights.allFinite() && bias.allFinite();
  }

  void check_shapes() const {
    if (static_cast<std::size_t>(vocab_size()) != vocabulary.size() ||
        static_cast<std::size_t>(candidate_count()) != registry.size() ||
        candidate_weights.cols() != embedding_size() || bias.size() != candidate_count()) {
      throw ShapeError("model dimensions disagree with vocabulary/registry");
    }
  }

  template <class Other>
  LogLinearModel<Other> cast() const {
    LogLinearModel<Other> out;
    out.word_projection = word_projection.template cast<Other>();
    out.candidate_weights = candidate_weights.template cast<Other>();
    out.bias = bias.template cast<Other>();
    out.vocabulary = vocabulary;
    out.registry = registry;
    return out;
  }
};

namespace detail {

inline Eigen::VectorXd log_softmax(Eigen::VectorXd logits) {
  const double max = logits.maxCoeff();
  const double lse = max + std::log((logits.array() - max).exp().sum());
  logits.array() -= lse;
  return logits;
}

/// Sum of per-word logit vectors. Word ids are summed in sorted order so the
/// result is exactly permutation invariant.
template <class Scalar>
Eigen::VectorXd summed_logits(const LogLinearModel<Scalar>& model,
                              std::span<const TokenId> word_ids) {
  using Vector = typename LogLinearModel<Scalar>::Vector;
  std::vector<TokenId> sorted(word_ids.begin(), word_ids.end());
  std::sort(sorted.begin(), sorted.end());
  Vector pooled = Vector::Zero(model.embedding_size());
  for (TokenId id : sorted) {
    if (static_cast<Eigen::Index>(id) >= model.vocab_size()) {
      throw InvalidArgument("word id out of range: " + std::to_string(id));
    }
    pooled += model.word_projection.col(id);
  }
  const Vector logits = model.candidate_weights * pooled +
                        static_cast<Scalar>(sorted.size()) * model.bias;
  return logits.template cast<double>();
}

}  // namespace detail

/// P(c | w): log-softmax of the word's candidate logits (Z1 via
/// max-subtraction).
template <class Scalar>
CandidateDistribution word_distribution(const LogLinearModel<Scalar>& model, TokenId word_id) {
  const TokenId ids[] = {word_id};
  return CandidateDistribution{detail::log_softmax(detail::summed_logits(model, ids))};
}

/// P(c | w_1..w_k): per-candidate sum of word log-probabilities renormalized
/// by Z2. Equal to log-softmax of the summed logits, which avoids the
/// underflow of the explicit product form.
template <class Scalar>
CandidateDistribution sequence_distribution(const LogLinearModel<Scalar>& model,
                                            std::span<const TokenId> word_ids) {
  if (word_ids.empty()) {
    throw EmptyQueryError("cannot score an empty word sequence");
  }
  return CandidateDistribution{detail::log_softmax(detail::summed_logits(model, word_ids))};
}

/// Orders all candidates for a scored distribution. Ties break toward the
/// smaller candidate id.
Ranking ranking_from_distribution(std::string query_id, const CandidateDistribution& dist);

/// Tokenizes the query and ranks every candidate. Out-of-vocabulary terms
/// are skipped when `skip_oov` is set and rejected otherwise; a query with
/// no usable terms raises EmptyQueryError. Scores are normalized
/// log-probabilities.
template <class Scalar>
Ranking rank(const LogLinearModel<Scalar>& model, const Tokenizer& tokenizer,
             const std::string& query_id, std::string_view query_text, bool skip_oov = true) {
  std::vector<TokenId> ids;
  for (const auto& token : tokenizer.tokenize(query_text)) {
    if (auto id = model.vocabulary.id_of(token)) {
      ids.push_back(*id);
    } else if (!skip_oov) {
      throw EmptyQueryError("query term out of vocabulary: " + token);
    }
  }
  if (ids.empty()) {
    throw EmptyQueryError("query has no in-vocabulary terms: " + std::string(query_text));
  }
  return ranking_from_distribution(query_id, sequence_distribution(model, ids));
}

/// Eq.-style normalized Shannon entropy: -(1/log|C|) * sum p log p, with
/// 0 log 0 = 0. 1 for the uniform distribution, 0 for a one-hot one.
double normalized_entropy(const CandidateDistribution& dist);

/// Entropy of unnormalized log scores; renormalizes first. Used when scores
/// come back from a run file with limited precision.
double normalized_entropy_from_scores(const Eigen::VectorXd& log_scores);

/// The k vocabulary tokens whose embeddings are closest (l2) to `term`'s,
/// excluding the term itself and the reserved tokens. Ascending by distance,
/// ties by token id.
template <class Scalar>
std::vector<std::pair<std::string, double>> nearest_terms(const LogLinearModel<Scalar>& model,
                                                          std::string_view term, std::size_t k);

std::vector<std::pair<TokenId, double>> nearest_term_ids_impl(
    const Eigen::MatrixXd& word_projection, TokenId term_id, std::size_t k);

template <class Scalar>
std::vector<std::pair<TokenId, double>> nearest_term_ids(const LogLinearModel<Scalar>& model,
                                                         TokenId term_id, std::size_t k) {
  if (term_id >= model.vocab_size()) {
    throw InvalidArgument("term id out of range: " + std::to_string(term_id));
  }
  return nearest_term_ids_impl(model.word_projection.template cast<double>(), term_id, k);
}

template <class Scalar>
std::vector<std::pair<std::string, double>> nearest_terms(const LogLinearModel<Scalar>& model,
                                                          std::string_view term, std::size_t k) {
  const auto id = model.vocabulary.id_of(term);
  if (!id) {
    throw InvalidArgument("term not in vocabulary: " + std::string(term));
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [token_id, distance] : nearest_term_ids(model, *id, k)) {
    out.emplace_back(model.vocabulary.token_of(token_id), distance);
  }
  return out;
}

}  // namespace sert
