#include "sert/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sert/rng.hpp"

namespace sert {

namespace {

std::string padded(std::size_t value, int width = 3) {
  std::string digits = std::to_string(value);
  while (digits.size() < static_cast<std::size_t>(width)) digits.insert(digits.begin(), '0');
  return digits;
}

std::string candidate_name(std::size_t c) { return "cand" + padded(c); }
std::string topical_token(std::size_t c, std::size_t k) {
  return "top" + padded(c) + "w" + padded(k);
}
std::string noise_token(std::size_t j) { return "shared" + padded(j); }

std::vector<std::string> sample_without_replacement(const std::vector<std::string>& pool,
                                                    std::size_t count, Rng& rng) {
  std::vector<std::size_t> indices(pool.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  rng.shuffle(indices);
  count = std::min(count, pool.size());
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[indices[i]]);
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) text.push_back(' ');
    text += tokens[i];
  }
  return text;
}

}  // namespace

void SyntheticOptions::validate() const {
  if (n_candidates < 1 || docs_per_candidate < 1 || vocab_per_candidate < 1 ||
      tokens_per_doc < 1 || noise_vocab < 1) {
    throw InvalidArgument("synthetic corpus counts must be >= 1");
  }
  if (noise_rate < 0.0 || noise_rate >= 1.0) {
    throw InvalidArgument("noise rate must be in [0, 1)");
  }
  if (min_query_terms < 1 || max_query_terms < min_query_terms) {
    throw InvalidArgument("query term range invalid");
  }
  if (topic_skew < 0.0) {
    throw InvalidArgument("topic skew must be >= 0");
  }
  if (phrase_query_stride > 0 && (vocab_per_candidate < 3 || tokens_per_doc < 8)) {
    throw InvalidArgument("phrase queries need >= 3 pool tokens and >= 8 tokens per doc");
  }
  if (phrase_query_stride > 0 && phrase_occurrences < 1) {
    throw InvalidArgument("phrase occurrences must be >= 1");
  }
}

namespace {

/// Sampler over [0, n) with probabilities proportional to 1/(rank+1)^skew,
/// where ranks are a seeded permutation of the indices.
class SkewedSampler {
 public:
  SkewedSampler(std::size_t n, double skew, Rng& rng) : indices_(n), cumulative_(n) {
    for (std::size_t i = 0; i < n; ++i) indices_[i] = i;
    rng.shuffle(indices_);
    double total = 0.0;
    for (std::size_t rank = 0; rank < n; ++rank) {
      total += 1.0 / std::pow(static_cast<double>(rank + 1), skew);
      cumulative_[rank] = total;
    }
  }

  std::size_t draw(Rng& rng) const {
    const double target = rng.uniform() * cumulative_.back();
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
    const std::size_t rank =
        std::min(static_cast<std::size_t>(it - cumulative_.begin()), indices_.size() - 1);
    return indices_[rank];
  }

 private:
  std::vector<std::size_t> indices_;
  std::vector<double> cumulative_;
};

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options) {
  options.validate();
  Rng rng(options.seed);
  SyntheticCorpus corpus;

  std::vector<std::vector<std::string>> pools(options.n_candidates);
  for (std::size_t c = 0; c < options.n_candidates; ++c) {
    corpus.candidates.push_back(candidate_name(c));
    pools[c].reserve(options.vocab_per_candidate);
    for (std::size_t k = 0; k < options.vocab_per_candidate; ++k) {
      pools[c].push_back(topical_token(c, k));
    }
  }

  auto is_phrase_candidate = [&](std::size_t c) {
    return options.phrase_query_stride > 0 &&
           (c + 1) % options.phrase_query_stride == 0;
  };

  for (std::size_t c = 0; c < options.n_candidates; ++c) {
    // Phrase candidates reserve their last two pool tokens: those never
    // enter the regular rotation and only occur as adjacent plantings.
    const std::size_t regular_pool =
        is_phrase_candidate(c) ? pools[c].size() - 2 : pools[c].size();
    const SkewedSampler sampler(regular_pool, options.topic_skew, rng);
    std::vector<std::vector<std::string>> docs(options.docs_per_candidate);
    std::vector<bool> seen(regular_pool, false);
    for (std::size_t d = 0; d < options.docs_per_candidate; ++d) {
      auto& tokens = docs[d];
      tokens.reserve(options.tokens_per_doc);
      for (std::size_t t = 0; t < options.tokens_per_doc; ++t) {
        if (rng.bernoulli(options.noise_rate)) {
          tokens.push_back(noise_token(rng.below(options.noise_vocab)));
        } else {
          const std::size_t pick = sampler.draw(rng);
          seen[pick] = true;
          tokens.push_back(pools[c][pick]);
        }
      }
    }
    // Every pool token occurs at least once, so queries never go out of
    // vocabulary; rare tokens stay rare.
    std::set<std::pair<std::size_t, std::size_t>> injected;
    for (std::size_t k = 0; k < regular_pool; ++k) {
      if (seen[k]) continue;
      std::pair<std::size_t, std::size_t> slot;
      do {
        slot = {rng.below(docs.size()), rng.below(options.tokens_per_doc)};
      } while (!injected.insert(slot).second);
      docs[slot.first][slot.second] = pools[c][k];
    }
    if (is_phrase_candidate(c)) {
      // Each planting embeds the pair in a run of noise tokens, so no
      // informative neighbor can stand in for the phrase itself.
      constexpr std::size_t kPatch = 8;
      constexpr std::size_t kPairOffset = 3;
      for (std::size_t occurrence = 0; occurrence < options.phrase_occurrences;
           ++occurrence) {
        std::size_t doc_index = 0, start = 0;
        bool free = false;
        while (!free) {
          doc_index = rng.below(docs.size());
          start = rng.below(options.tokens_per_doc - kPatch + 1);
          free = true;
          for (std::size_t offset = 0; offset < kPatch; ++offset) {
            if (injected.contains({doc_index, start + offset})) free = false;
          }
        }
        for (std::size_t offset = 0; offset < kPatch; ++offset) {
          injected.insert({doc_index, start + offset});
          docs[doc_index][start + offset] =
              options.noise_rate > 0.0 ? noise_token(rng.below(options.noise_vocab))
                                       : pools[c][sampler.draw(rng)];
        }
        docs[doc_index][start + kPairOffset] = pools[c][regular_pool];
        docs[doc_index][start + kPairOffset + 1] = pools[c][regular_pool + 1];
      }
    }
    for (std::size_t d = 0; d < options.docs_per_candidate; ++d) {
      corpus.documents.push_back(
          {"c" + padded(c) + "d" + padded(d), join(docs[d]), {corpus.candidates[c]}});
    }
  }

  for (std::size_t c = 0; c < options.n_candidates; ++c) {
    Query query;
    query.query_id = "q" + padded(c);
    if (is_phrase_candidate(c)) {
      query.text = pools[c][pools[c].size() - 2] + " " + pools[c][pools[c].size() - 1];
    } else {
      const std::size_t span = options.max_query_terms - options.min_query_terms + 1;
      const std::size_t terms = options.min_query_terms + rng.below(span);
      query.text = join(sample_without_replacement(pools[c], terms, rng));
    }
    corpus.qrels[query.query_id][corpus.candidates[c]] = 1;
    corpus.queries.push_back(query);
  }
  return corpus;
}

SyntheticCorpus generate_synthetic_corpus(std::size_t n_candidates,
                                          std::size_t docs_per_candidate,
                                          std::size_t vocab_per_candidate, double noise_rate,
                                          std::uint64_t seed) {
  SyntheticOptions options;
  options.n_candidates = n_candidates;
  options.docs_per_candidate = docs_per_candidate;
  options.vocab_per_candidate = vocab_per_candidate;
  options.noise_rate = noise_rate;
  options.seed = seed;
  return generate_synthetic_corpus(options);
}

void MixedSyntheticOptions::validate() const {
  if (n_candidates < 4 || n_candidates % 2 != 0) {
    throw InvalidArgument("mixed corpus needs an even candidate count >= 4");
  }
  if (docs_per_candidate < 2 || vocab_per_candidate < 1 || tokens_per_doc < 2 ||
      noise_vocab < 1 || decoy_docs_per_candidate < 1 || decoy_associations < 1 ||
      exact_occurrences < 1 || synonym_plantings < 1) {
    throw InvalidArgument("mixed corpus counts invalid");
  }
  if (decoy_associations > n_candidates - 1) {
    throw InvalidArgument("decoy associations exceed the candidate count");
  }
  if (noise_rate < 0.0 || noise_rate >= 1.0 || partner_rate < 0.0 ||
      partner_rate >= 1.0 || decoy_rate < 0.0 || decoy_rate >= 1.0) {
    throw InvalidArgument("mixed corpus rates must be in [0, 1)");
  }
}

SyntheticCorpus generate_mixed_synthetic_corpus(const MixedSyntheticOptions& options) {
  options.validate();
  Rng rng(options.seed);
  SyntheticCorpus corpus;

  const std::size_t semantic = options.n_candidates / 2;
  std::vector<std::vector<std::string>> pools(options.n_candidates);
  for (std::size_t c = 0; c < options.n_candidates; ++c) {
    corpus.candidates.push_back(candidate_name(c));
    for (std::size_t k = 0; k < options.vocab_per_candidate; ++k) {
      pools[c].push_back(topical_token(c, k));
    }
  }

  auto query_side = [](std::size_t c) { return "syq" + padded(c); };
  auto doc_side = [](std::size_t c) { return "syd" + padded(c); };
  auto unique_token = [](std::size_t c) { return "unq" + padded(c); };

  for (std::size_t c = 0; c < options.n_candidates; ++c) {
    const bool is_semantic = c < semantic;
    std::vector<std::vector<std::string>> docs(options.docs_per_candidate);
    for (std::size_t d = 0; d < options.docs_per_candidate; ++d) {
      auto& tokens = docs[d];
      tokens.reserve(options.tokens_per_doc);
      for (std::size_t t = 0; t < options.tokens_per_doc; ++t) {
        if (rng.bernoulli(options.noise_rate)) {
          tokens.push_back(noise_token(rng.below(options.noise_vocab)));
        } else if (is_semantic && rng.bernoulli(options.partner_rate)) {
          tokens.push_back(doc_side(c));
        } else {
          tokens.push_back(pools[c][rng.below(pools[c].size())]);
        }
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> used;
    if (is_semantic) {
      // The query-side synonym only ever appears right before its partner:
      // training windows that contain it are pure evidence for the owner.
      for (std::size_t k = 0; k < options.synonym_plantings; ++k) {
        std::pair<std::size_t, std::size_t> slot;
        do {
          slot = {rng.below(docs.size()), rng.below(options.tokens_per_doc - 1)};
        } while (used.contains(slot) || used.contains({slot.first, slot.second + 1}));
        used.insert(slot);
        used.insert({slot.first, slot.second + 1});
        docs[slot.first][slot.second] = query_side(c);
        docs[slot.first][slot.second + 1] = doc_side(c);
      }
    } else {
      // The unique token is confined to the first few documents.
      const std::size_t spread = std::min<std::size_t>(3, docs.size());
      for (std::size_t k = 0; k < options.exact_occurrences; ++k) {
        std::pair<std::size_t, std::size_t> slot;
        do {
          slot = {rng.below(spread), rng.below(options.tokens_per_doc)};
        } while (used.contains(slot));
        used.insert(slot);
        docs[slot.first][slot.second] = unique_token(c);
      }
    }
    for (std::size_t d = 0; d < options.docs_per_candidate; ++d) {
      corpus.documents.push_back(
          {"c" + padded(c) + "d" + padded(d), join(docs[d]), {corpus.candidates[c]}});
    }
  }

  // Decoy documents: dense query-side counts under diffuse associations that
  // never include the owner. Term counting chases them, while each decoy's
  // own boilerplate token soaks up the diluted training targets.
  std::size_t decoy_index = 0;
  for (std::size_t c = 0; c < semantic; ++c) {
    std::vector<std::string> others;
    for (std::size_t x = 0; x < options.n_candidates; ++x) {
      if (x != c) others.push_back(corpus.candidates[x]);
    }
    for (std::size_t b = 0; b < options.decoy_docs_per_candidate; ++b) {
      const std::string boilerplate = "dcy" + padded(decoy_index);
      std::vector<std::string> tokens;
      tokens.reserve(options.tokens_per_doc);
      for (std::size_t t = 0; t < options.tokens_per_doc; ++t) {
        if (rng.bernoulli(options.noise_rate)) {
          tokens.push_back(noise_token(rng.below(options.noise_vocab)));
        } else if (rng.bernoulli(options.decoy_rate)) {
          tokens.push_back(query_side(c));
        } else {
          tokens.push_back(boilerplate);
        }
      }
      corpus.documents.push_back(
          {"decoy" + padded(decoy_index++), join(tokens),
           sample_without_replacement(others, options.decoy_associations, rng)});
    }
  }

  for (std::size_t c = 0; c < options.n_candidates; ++c) {
    Query query;
    if (c < semantic) {
      query = {"qsem" + padded(c), query_side(c)};
    } else {
      query = {"qexa" + padded(c), unique_token(c)};
    }
    corpus.qrels[query.query_id][corpus.candidates[c]] = 1;
    corpus.queries.push_back(query);
  }
  return corpus;
}

}  // namespace sert
