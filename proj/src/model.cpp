#include "sert/model.hpp"

namespace sert {

Ranking ranking_from_distribution(std::string query_id, const CandidateDistribution& dist) {
  Ranking ranking;
  ranking.query_id = std::move(query_id);
  ranking.entries.reserve(dist.log_probs.size());
  for (Eigen::Index c = 0; c < dist.log_probs.size(); ++c) {
    ranking.entries.push_back({static_cast<CandidateId>(c), dist.log_probs[c]});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const RankingEntry& a, const RankingEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.candidate < b.candidate;
            });
  return ranking;
}

double normalized_entropy(const CandidateDistribution& dist) {
  const Eigen::Index count = dist.log_probs.size();
  if (count < 2) {
    throw InvalidArgument("normalized entropy needs at least two candidates");
  }
  double entropy = 0.0;
  for (Eigen::Index c = 0; c < count; ++c) {
    const double lp = dist.log_probs[c];
    const double p = std::exp(lp);
    if (p > 0.0) entropy -= p * lp;
  }
  const double eta = entropy / std::log(static_cast<double>(count));
  return std::clamp(eta, 0.0, 1.0);
}

double normalized_entropy_from_scores(const Eigen::VectorXd& log_scores) {
  return normalized_entropy(CandidateDistribution{detail::log_softmax(log_scores)});
}

std::vector<std::pair<TokenId, double>> nearest_term_ids_impl(
    const Eigen::MatrixXd& word_projection, TokenId term_id, std::size_t k) {
  if (k < 1) {
    throw InvalidArgument("nearest_terms needs k >= 1");
  }
  const Eigen::VectorXd anchor = word_projection.col(term_id);
  std::vector<std::pair<TokenId, double>> distances;
  distances.reserve(word_projection.cols());
  for (Eigen::Index j = Vocabulary::kReservedCount; j < word_projection.cols(); ++j) {
    if (static_cast<TokenId>(j) == term_id) continue;
    distances.emplace_back(static_cast<TokenId>(j), (word_projection.col(j) - anchor).norm());
  }
  std::sort(distances.begin(), distances.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  if (distances.size() > k) distances.resize(k);
  return distances;
}

}  // namespace sert
