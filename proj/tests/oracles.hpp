// Naive 64-bit reference implementations used only by tests. Everything here
// is written with explicit loops and plain probability arithmetic (no
// log-space tricks, no shared code with the library's scoring paths) so the
// production implementations can be checked against an independent route.
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "sert/baselines.hpp"
#include "sert/corpus.hpp"
#include "sert/model.hpp"
#include "sert/rng.hpp"
#include "sert/training.hpp"

namespace oracle {

struct DenseModel {
  // word_projection[k][i]: feature k of word i; candidate_weights[j][k];
  // bias[j].
  std::vector<std::vector<double>> word_projection;
  std::vector<std::vector<double>> candidate_weights;
  std::vector<double> bias;

  std::size_t embedding_size() const { return word_projection.size(); }
  std::size_t vocab_size() const {
    return word_projection.empty() ? 0 : word_projection[0].size();
  }
  std::size_t candidate_count() const { return candidate_weights.size(); }
};

inline DenseModel from_model(const sert::LogLinearModel<double>& model) {
  DenseModel dense;
  const std::size_t e = model.embedding_size();
  const std::size_t v = model.vocab_size();
  const std::size_t c = model.candidate_count();
  dense.word_projection.assign(e, std::vector<double>(v, 0.0));
  for (std::size_t k = 0; k < e; ++k) {
    for (std::size_t i = 0; i < v; ++i) {
      dense.word_projection[k][i] = model.word_projection(k, i);
    }
  }
  dense.candidate_weights.assign(c, std::vector<double>(e, 0.0));
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t k = 0; k < e; ++k) {
      dense.candidate_weights[j][k] = model.candidate_weights(j, k);
    }
  }
  dense.bias.assign(c, 0.0);
  for (std::size_t j = 0; j < c; ++j) dense.bias[j] = model.bias(j);
  return dense;
}

/// P(c_j | w_i) for one word: plain exp/sum softmax of the word's logits.
inline std::vector<double> word_probabilities(const DenseModel& m, std::size_t word) {
  std::vector<double> probs(m.candidate_count(), 0.0);
  double z1 = 0.0;
  for (std::size_t j = 0; j < m.candidate_count(); ++j) {
    double logit = m.bias[j];
    for (std::size_t k = 0; k < m.embedding_size(); ++k) {
      logit += m.candidate_weights[j][k] * m.word_projection[k][word];
    }
    probs[j] = std::exp(logit);
    z1 += probs[j];
  }
  for (double& p : probs) p /= z1;
  return probs;
}

/// P(c | w_1..w_n): product of per-word probabilities, renormalized by Z2.
inline std::vector<double> sequence_probabilities(const DenseModel& m,
                                                  const std::vector<sert::TokenId>& words) {
  std::vector<double> product(m.candidate_count(), 1.0);
  for (sert::TokenId w : words) {
    const auto per_word = word_probabilities(m, w);
    for (std::size_t j = 0; j < m.candidate_count(); ++j) {
      product[j] *= per_word[j];
    }
  }
  double z2 = 0.0;
  for (double p : product) z2 += p;
  for (double& p : product) p /= z2;
  return product;
}

/// Batch loss evaluated the long way: per-instance cross entropy against the
/// naive sequence probabilities, document-length weights, then the explicit
/// L2 sum.
inline double batch_loss(const DenseModel& m, const std::vector<sert::NGramInstance>& batch,
                         double lambda, std::uint32_t d_max) {
  double ce = 0.0;
  for (const auto& instance : batch) {
    const auto probs = sequence_probabilities(m, instance.word_ids);
    double h = 0.0;
    for (const auto& [candidate, mass] : instance.target) {
      h -= mass * std::log(probs[candidate]);
    }
    ce += static_cast<double>(d_max) / static_cast<double>(instance.doc_length) * h;
  }
  ce /= static_cast<double>(batch.size());

  double sq = 0.0;
  for (const auto& row : m.word_projection) {
    for (double v : row) sq += v * v;
  }
  for (const auto& row : m.candidate_weights) {
    for (double v : row) sq += v * v;
  }
  return ce + lambda / (2.0 * static_cast<double>(batch.size())) * sq;
}

/// Flattened parameter view used by the finite-difference check: word
/// projection entries first (row-major), then candidate weights (row-major),
/// then the bias.
inline std::size_t parameter_count(const sert::LogLinearModel<double>& model) {
  return static_cast<std::size_t>(model.word_projection.size() +
                                  model.candidate_weights.size() + model.bias.size());
}

inline double& parameter_at(sert::LogLinearModel<double>& model, std::size_t index) {
  const auto wv = static_cast<std::size_t>(model.word_projection.size());
  const auto wc = static_cast<std::size_t>(model.candidate_weights.size());
  if (index < wv) {
    const auto cols = static_cast<std::size_t>(model.word_projection.cols());
    return model.word_projection(index / cols, index % cols);
  }
  index -= wv;
  if (index < wc) {
    const auto cols = static_cast<std::size_t>(model.candidate_weights.cols());
    return model.candidate_weights(index / cols, index % cols);
  }
  return model.bias(index - wc);
}

inline double gradient_at(const sert::BatchGradients<double>& grads, std::size_t index) {
  const auto wv = static_cast<std::size_t>(grads.d_word_projection.size());
  const auto wc = static_cast<std::size_t>(grads.d_candidate_weights.size());
  if (index < wv) {
    const auto cols = static_cast<std::size_t>(grads.d_word_projection.cols());
    return grads.d_word_projection(index / cols, index % cols);
  }
  index -= wv;
  if (index < wc) {
    const auto cols = static_cast<std::size_t>(grads.d_candidate_weights.cols());
    return grads.d_candidate_weights(index / cols, index % cols);
  }
  return grads.d_bias(index - wc);
}

/// Central finite differences of the production batch loss. Returns the full
/// flattened gradient.
inline std::vector<double> finite_difference_gradient(sert::LogLinearModel<double> model,
                                                      const std::vector<sert::NGramInstance>& batch,
                                                      double lambda, std::uint32_t d_max,
                                                      double step = 1e-5) {
  std::vector<double> grad(parameter_count(model), 0.0);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    double& theta = parameter_at(model, i);
    const double saved = theta;
    theta = saved + step;
    const double up = sert::batch_loss(model, batch, lambda, d_max).total;
    theta = saved - step;
    const double down = sert::batch_loss(model, batch, lambda, d_max).total;
    theta = saved;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

/// Relative error with a floor, as used by the gradient checks.
inline double relative_error(double a, double b) {
  const double denominator = std::max(std::abs(a) + std::abs(b), 1e-6);
  return std::abs(a - b) / denominator;
}

// --- Appendix-style gradient: product rule across the window words and the
// --- quotient rule through Z2, using per-word softmax jacobians. This is the
// --- paper's derivation route, mathematically equal to the log-space
// --- gradient the library computes.

struct DenseGradients {
  std::vector<std::vector<double>> d_word_projection;    // e x |V|
  std::vector<std::vector<double>> d_candidate_weights;  // |C| x e
  std::vector<double> d_bias;
};

inline DenseGradients product_rule_gradients(const DenseModel& m,
                                             const std::vector<sert::NGramInstance>& batch,
                                             double lambda, std::uint32_t d_max) {
  const std::size_t e = m.embedding_size();
  const std::size_t v = m.vocab_size();
  const std::size_t c = m.candidate_count();
  DenseGradients g;
  g.d_word_projection.assign(e, std::vector<double>(v, 0.0));
  g.d_candidate_weights.assign(c, std::vector<double>(e, 0.0));
  g.d_bias.assign(c, 0.0);

  const double inv_m = 1.0 / static_cast<double>(batch.size());
  for (const auto& instance : batch) {
    const std::size_t n = instance.word_ids.size();
    const double weight =
        static_cast<double>(d_max) / static_cast<double>(instance.doc_length);

    // Per-word probabilities P[i][j] and the unnormalized product.
    std::vector<std::vector<double>> per_word(n);
    std::vector<double> product(c, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      per_word[i] = word_probabilities(m, instance.word_ids[i]);
      for (std::size_t j = 0; j < c; ++j) product[j] *= per_word[i][j];
    }
    double z2 = 0.0;
    for (double p : product) z2 += p;

    // dL/dP~_j accumulated through the quotient rule: for target mass p_t on
    // candidate t, d(-w p_t log(P~_t/Z2))/dP~_j
    //   = -w p_t (1/P~_t) [j == t] + w p_t / Z2.
    std::vector<double> d_product(c, 0.0);
    for (const auto& [target_candidate, mass] : instance.target) {
      for (std::size_t j = 0; j < c; ++j) {
        double value = weight * mass / z2;
        if (j == target_candidate) value -= weight * mass / product[j];
        d_product[j] += value;
      }
    }

    // Product rule: dP~_j/dtheta = sum_i dP_ij/dtheta * prod_{l != i} P_lj.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t word = instance.word_ids[i];
      std::vector<double> rest(c, 1.0);
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i) continue;
        for (std::size_t j = 0; j < c; ++j) rest[j] *= per_word[l][j];
      }
      // Per-word softmax jacobian, chained into each parameter.
      for (std::size_t j = 0; j < c; ++j) {
        const double outer = d_product[j] * rest[j] * inv_m;
        if (outer == 0.0) continue;
        // dP_ij/dW_c[l,:] = P_ij ([j==l] - P_il) x_i ; same factor for bias.
        for (std::size_t l = 0; l < c; ++l) {
          const double jac = per_word[i][j] * ((j == l ? 1.0 : 0.0) - per_word[i][l]);
          g.d_bias[l] += outer * jac;
          for (std::size_t k = 0; k < e; ++k) {
            g.d_candidate_weights[l][k] += outer * jac * m.word_projection[k][word];
          }
        }
        // dP_ij/dx_i = P_ij (W_c[j,:] - sum_l P_il W_c[l,:]).
        for (std::size_t k = 0; k < e; ++k) {
          double mixture = 0.0;
          for (std::size_t l = 0; l < c; ++l) {
            mixture += per_word[i][l] * m.candidate_weights[l][k];
          }
          g.d_word_projection[k][word] +=
              outer * per_word[i][j] * (m.candidate_weights[j][k] - mixture);
        }
      }
    }
  }

  if (lambda > 0.0) {
    const double decay = lambda * inv_m;
    for (std::size_t k = 0; k < e; ++k) {
      for (std::size_t i = 0; i < v; ++i) {
        g.d_word_projection[k][i] += decay * m.word_projection[k][i];
      }
    }
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t k = 0; k < e; ++k) {
        g.d_candidate_weights[j][k] += decay * m.candidate_weights[j][k];
      }
    }
  }
  return g;
}

// --- Naive baseline scorers over tiny collections. ---

struct TinyCollection {
  // docs[d] = token ids; assoc[d] = candidate ids.
  std::vector<std::vector<sert::TokenId>> docs;
  std::vector<std::vector<sert::CandidateId>> assoc;
  std::size_t candidates = 0;
  std::size_t vocab = 0;
};

inline double collection_probability(const TinyCollection& coll, sert::TokenId term) {
  std::size_t total = 0;
  std::size_t hits = 0;
  for (const auto& doc : coll.docs) {
    total += doc.size();
    for (auto t : doc) {
      if (t == term) ++hits;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

inline double avg_doc_length(const TinyCollection& coll) {
  std::size_t total = 0;
  for (const auto& doc : coll.docs) total += doc.size();
  return static_cast<double>(total) / static_cast<double>(coll.docs.size());
}

inline double smoothed(const sert::SmoothingSpec& smoothing, double beta, std::size_t tf,
                       std::size_t length, double collection_prob) {
  if (smoothing.kind == sert::SmoothingSpec::Kind::JelinekMercer) {
    const double ml =
        length == 0 ? 0.0 : static_cast<double>(tf) / static_cast<double>(length);
    return (1.0 - smoothing.lambda) * ml + smoothing.lambda * collection_prob;
  }
  return (static_cast<double>(tf) + beta * collection_prob) /
         (static_cast<double>(length) + beta);
}

inline std::vector<double> naive_model1_scores(const TinyCollection& coll,
                                               const std::vector<sert::TokenId>& query,
                                               const sert::SmoothingSpec& smoothing) {
  const double beta = smoothing.beta.value_or(avg_doc_length(coll));
  std::vector<double> scores(coll.candidates, 0.0);
  for (std::size_t c = 0; c < coll.candidates; ++c) {
    // Profile = concatenation of associated documents.
    std::size_t profile_length = 0;
    for (std::size_t d = 0; d < coll.docs.size(); ++d) {
      for (auto cand : coll.assoc[d]) {
        if (cand == c) profile_length += coll.docs[d].size();
      }
    }
    for (auto term : query) {
      std::size_t tf = 0;
      for (std::size_t d = 0; d < coll.docs.size(); ++d) {
        bool associated = false;
        for (auto cand : coll.assoc[d]) {
          if (cand == c) associated = true;
        }
        if (!associated) continue;
        for (auto t : coll.docs[d]) {
          if (t == term) ++tf;
        }
      }
      scores[c] += std::log(
          smoothed(smoothing, beta, tf, profile_length, collection_probability(coll, term)));
    }
  }
  return scores;
}

inline std::vector<double> naive_model2_scores(const TinyCollection& coll,
                                               const std::vector<sert::TokenId>& query,
                                               const sert::SmoothingSpec& smoothing) {
  const double beta = smoothing.beta.value_or(avg_doc_length(coll));
  std::vector<double> scores(coll.candidates, 0.0);
  for (std::size_t d = 0; d < coll.docs.size(); ++d) {
    if (coll.assoc[d].empty()) continue;
    double likelihood = 1.0;
    for (auto term : query) {
      std::size_t tf = 0;
      for (auto t : coll.docs[d]) {
        if (t == term) ++tf;
      }
      likelihood *= smoothed(smoothing, beta, tf, coll.docs[d].size(),
                             collection_probability(coll, term));
    }
    for (auto cand : coll.assoc[d]) {
      scores[cand] += likelihood / static_cast<double>(coll.assoc[d].size());
    }
  }
  return scores;
}

inline std::vector<double> naive_tfidf_scores(const TinyCollection& coll,
                                              const std::vector<sert::TokenId>& query) {
  const std::size_t docs = coll.docs.size();
  auto idf = [&](sert::TokenId term) {
    std::size_t df = 0;
    for (const auto& doc : coll.docs) {
      for (auto t : doc) {
        if (t == term) {
          ++df;
          break;
        }
      }
    }
    return df == 0 ? 0.0 : std::log(static_cast<double>(docs) / static_cast<double>(df));
  };

  std::vector<double> query_vec(coll.vocab, 0.0);
  for (auto term : query) query_vec[term] += 1.0;
  for (std::size_t t = 0; t < coll.vocab; ++t) query_vec[t] *= idf(t);
  double query_norm = 0.0;
  for (double w : query_vec) query_norm += w * w;
  query_norm = std::sqrt(query_norm);

  std::vector<double> scores(coll.candidates, 0.0);
  for (std::size_t c = 0; c < coll.candidates; ++c) {
    std::vector<double> cand_vec(coll.vocab, 0.0);
    for (std::size_t d = 0; d < coll.docs.size(); ++d) {
      bool associated = false;
      for (auto cand : coll.assoc[d]) {
        if (cand == c) associated = true;
      }
      if (!associated) continue;
      for (auto t : coll.docs[d]) cand_vec[t] += 1.0;
    }
    for (std::size_t t = 0; t < coll.vocab; ++t) cand_vec[t] *= idf(t);
    double dot = 0.0;
    double norm = 0.0;
    for (std::size_t t = 0; t < coll.vocab; ++t) {
      dot += cand_vec[t] * query_vec[t];
      norm += cand_vec[t] * cand_vec[t];
    }
    norm = std::sqrt(norm);
    scores[c] = (norm > 0.0 && query_norm > 0.0) ? dot / (norm * query_norm) : 0.0;
  }
  return scores;
}

/// Random tiny model over the given sizes; double precision.
inline sert::LogLinearModel<double> random_tiny_model(std::size_t vocab, std::size_t candidates,
                                                      std::size_t embedding, sert::Rng& rng) {
  sert::LogLinearModel<double> model;
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i + sert::Vocabulary::kReservedCount < vocab; ++i) {
    counts["word" + std::to_string(100 + i)] = 100 - i;
  }
  model.vocabulary = sert::Vocabulary::from_counts(counts, vocab);
  for (std::size_t c = 0; c < candidates; ++c) {
    model.registry.add("cand" + std::to_string(c));
  }
  model.word_projection.resize(embedding, model.vocabulary.size());
  for (Eigen::Index i = 0; i < model.word_projection.size(); ++i) {
    model.word_projection.data()[i] = rng.uniform(-1.0, 1.0);
  }
  model.candidate_weights.resize(candidates, embedding);
  for (Eigen::Index i = 0; i < model.candidate_weights.size(); ++i) {
    model.candidate_weights.data()[i] = rng.uniform(-1.0, 1.0);
  }
  model.bias.resize(candidates);
  for (Eigen::Index i = 0; i < model.bias.size(); ++i) {
    model.bias[i] = rng.uniform(-0.5, 0.5);
  }
  return model;
}

/// Random batch of instances for a model (targets over 1-2 candidates).
inline std::vector<sert::NGramInstance> random_batch(const sert::LogLinearModel<double>& model,
                                                     std::size_t instances, std::size_t window,
                                                     sert::Rng& rng) {
  std::vector<sert::NGramInstance> batch;
  for (std::size_t i = 0; i < instances; ++i) {
    sert::NGramInstance instance;
    for (std::size_t k = 0; k < window; ++k) {
      instance.word_ids.push_back(
          static_cast<sert::TokenId>(rng.below(model.vocabulary.size())));
    }
    instance.source_doc = "doc" + std::to_string(i);
    instance.doc_length = static_cast<std::uint32_t>(4 + rng.below(9));
    const std::size_t targets =
        1 + (model.registry.size() > 1 ? rng.below(2) : 0);
    std::vector<sert::CandidateId> chosen;
    while (chosen.size() < targets) {
      const auto c = static_cast<sert::CandidateId>(rng.below(model.registry.size()));
      bool seen = false;
      for (auto existing : chosen) {
        if (existing == c) seen = true;
      }
      if (!seen) chosen.push_back(c);
    }
    for (auto c : chosen) {
      instance.target.emplace_back(c, 1.0 / static_cast<double>(chosen.size()));
    }
    batch.push_back(std::move(instance));
  }
  return batch;
}

}  // namespace oracle
