#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sert {

namespace detail {

/// Shared forward/backward pass. `fetch(i)` must yield the i-th instance of
/// the batch; gradients are skipped when `gradients` is null.
template <class Scalar, class Fetch>
LossReport evaluate_batch(const LogLinearModel<Scalar>& model, Fetch&& fetch, std::size_t count,
                          double lambda, std::uint32_t d_max,
                          BatchGradients<Scalar>* gradients) {
  using Matrix = typename LogLinearModel<Scalar>::Matrix;
  using Vector = typename LogLinearModel<Scalar>::Vector;

  if (count == 0) {
    throw InvalidArgument("batch must contain at least one instance");
  }
  if (d_max == 0) {
    throw InvalidArgument("d_max must be >= 1");
  }
  if (gradients != nullptr) {
    gradients->d_word_projection =
        Matrix::Zero(model.word_projection.rows(), model.word_projection.cols());
    gradients->d_candidate_weights =
        Matrix::Zero(model.candidate_weights.rows(), model.candidate_weights.cols());
    gradients->d_bias = Vector::Zero(model.bias.size());
    gradients->touched_words.clear();
  }

  const double inv_m = 1.0 / static_cast<double>(count);
  double ce = 0.0;
  std::vector<TokenId> sorted_ids;
  Vector pooled(model.embedding_size());

  for (std::size_t i = 0; i < count; ++i) {
    const NGramInstance& instance = fetch(i);
    if (instance.doc_length == 0) {
      throw InvalidArgument("instance from a zero-length document: " + instance.source_doc);
    }
    if (instance.word_ids.empty()) {
      throw InvalidArgument("instance with empty window: " + instance.source_doc);
    }
    const double weight =
        static_cast<double>(d_max) / static_cast<double>(instance.doc_length);

    sorted_ids.assign(instance.word_ids.begin(), instance.word_ids.end());
    std::sort(sorted_ids.begin(), sorted_ids.end());
    pooled.setZero();
    for (TokenId id : sorted_ids) {
      if (static_cast<Eigen::Index>(id) >= model.vocab_size()) {
        throw InvalidArgument("word id out of range: " + std::to_string(id));
      }
      pooled += model.word_projection.col(id);
    }
    Eigen::VectorXd log_probs =
        (model.candidate_weights * pooled +
         static_cast<Scalar>(sorted_ids.size()) * model.bias)
            .template cast<double>();
    log_probs = log_softmax(std::move(log_probs));

    double instance_ce = 0.0;
    for (const auto& [candidate, mass] : instance.target) {
      if (static_cast<Eigen::Index>(candidate) >= model.candidate_count()) {
        throw InvalidArgument("candidate id out of range: " + std::to_string(candidate));
      }
      instance_ce -= mass * log_probs[candidate];
    }
    ce += weight * instance_ce;

    if (gradients != nullptr) {
      Eigen::VectorXd delta = (weight * inv_m) * log_probs.array().exp().matrix();
      for (const auto& [candidate, mass] : instance.target) {
        delta[candidate] -= weight * inv_m * mass;
      }
      const Vector delta_s = delta.cast<Scalar>();
      gradients->d_bias += static_cast<Scalar>(sorted_ids.size()) * delta_s;
      gradients->d_candidate_weights += delta_s * pooled.transpose();
      const Vector back = model.candidate_weights.transpose() * delta_s;
      for (TokenId id : sorted_ids) {
        gradients->d_word_projection.col(id) += back;
      }
      gradients->touched_words.insert(gradients->touched_words.end(), sorted_ids.begin(),
                                      sorted_ids.end());
    }
  }

  LossReport report;
  report.instances_seen = count;
  report.cross_entropy_term = ce * inv_m;
  if (lambda > 0) {
    const double sq_norms =
        model.word_projection.colwise().squaredNorm().template cast<double>().sum() +
        model.candidate_weights.colwise().squaredNorm().template cast<double>().sum();
    report.regularization_term = lambda / (2.0 * static_cast<double>(count)) * sq_norms;
    if (gradients != nullptr) {
      const Scalar decay = static_cast<Scalar>(lambda * inv_m);
      gradients->d_word_projection += decay * model.word_projection;
      gradients->d_candidate_weights += decay * model.candidate_weights;
    }
  }
  report.total = report.cross_entropy_term + report.regularization_term;
  if (!std::isfinite(report.total)) {
    throw NumericError("non-finite batch loss");
  }
  if (gradients != nullptr) {
    std::sort(gradients->touched_words.begin(), gradients->touched_words.end());
    gradients->touched_words.erase(
        std::unique(gradients->touched_words.begin(), gradients->touched_words.end()),
        gradients->touched_words.end());
  }
  return report;
}

template <class Mat, class Scalar>
void adadelta_update(Mat& param, const Mat& grad, Mat& grad_sq, Mat& update_sq, Scalar rho,
                     Scalar eps) {
  grad_sq = (rho * grad_sq.array() + (Scalar{1} - rho) * grad.array().square()).matrix();
  const Mat step =
      (-((update_sq.array() + eps).sqrt() / (grad_sq.array() + eps).sqrt()) * grad.array())
          .matrix();
  update_sq = (rho * update_sq.array() + (Scalar{1} - rho) * step.array().square()).matrix();
  param += step;
}

}  // namespace detail

template <class Scalar>
std::size_t apply_pretrained_embeddings(LogLinearModel<Scalar>& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);
  std::string line;
  std::size_t line_no = 0;
  std::size_t written = 0;
  std::vector<Scalar> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    values.clear();
    double v;
    while (fields >> v) values.push_back(static_cast<Scalar>(v));
    if (values.size() != static_cast<std::size_t>(model.embedding_size())) {
      throw ShapeError("embedding file line " + std::to_string(line_no) + " has " +
                       std::to_string(values.size()) + " values, expected " +
                       std::to_string(model.embedding_size()));
    }
    if (auto id = model.vocabulary.id_of(token)) {
      for (Eigen::Index r = 0; r < model.embedding_size(); ++r) {
        model.word_projection(r, *id) = values[r];
      }
      ++written;
    }
  }
  return written;
}

template <class Scalar>
std::pair<LogLinearModel<Scalar>, OptimizerState<Scalar>> initialize(
    const Vocabulary& vocabulary, const CandidateRegistry& registry, std::size_t embedding_size,
    std::uint64_t seed, const std::optional<std::string>& init_embeddings) {
  if (embedding_size < 1) throw InvalidArgument("embedding size must be >= 1");
  if (vocabulary.size() < 1 || registry.size() < 1) {
    throw InvalidArgument("initialize needs a non-empty vocabulary and registry");
  }

  using Vector = typename LogLinearModel<Scalar>::Vector;
  LogLinearModel<Scalar> model;
  model.vocabulary = vocabulary;
  model.registry = registry;
  const auto e = static_cast<Eigen::Index>(embedding_size);
  const auto v = static_cast<Eigen::Index>(vocabulary.size());
  const auto c = static_cast<Eigen::Index>(registry.size());

  Rng rng(seed);
  const double word_bound = std::sqrt(6.0 / static_cast<double>(e + v));
  model.word_projection.resize(e, v);
  for (Eigen::Index col = 0; col < v; ++col) {
    for (Eigen::Index row = 0; row < e; ++row) {
      model.word_projection(row, col) =
          static_cast<Scalar>(rng.uniform(-word_bound, word_bound));
    }
  }
  const double cand_bound = std::sqrt(6.0 / static_cast<double>(c + e));
  model.candidate_weights.resize(c, e);
  for (Eigen::Index row = 0; row < c; ++row) {
    for (Eigen::Index col = 0; col < e; ++col) {
      model.candidate_weights(row, col) =
          static_cast<Scalar>(rng.uniform(-cand_bound, cand_bound));
    }
  }
  model.bias = Vector::Zero(c);

  if (init_embeddings) {
    apply_pretrained_embeddings(model, *init_embeddings);
  }
  return {std::move(model), OptimizerState<Scalar>::zeros_like(model)};
}

template <class Scalar>
LossReport batch_loss(const LogLinearModel<Scalar>& model, std::span<const NGramInstance> batch,
                      double lambda, std::uint32_t d_max) {
  return detail::evaluate_batch<Scalar>(
      model, [&](std::size_t i) -> const NGramInstance& { return batch[i]; }, batch.size(),
      lambda, d_max, nullptr);
}

template <class Scalar>
BatchGradients<Scalar> batch_gradients(const LogLinearModel<Scalar>& model,
                                       std::span<const NGramInstance> batch, double lambda,
                                       std::uint32_t d_max) {
  BatchGradients<Scalar> gradients;
  detail::evaluate_batch<Scalar>(
      model, [&](std::size_t i) -> const NGramInstance& { return batch[i]; }, batch.size(),
      lambda, d_max, &gradients);
  return gradients;
}

template <class Scalar>
void adadelta_step(LogLinearModel<Scalar>& model, const BatchGradients<Scalar>& gradients,
                   OptimizerState<Scalar>& state, double rho, double eps) {
  const auto r = static_cast<Scalar>(rho);
  const auto e = static_cast<Scalar>(eps);
  detail::adadelta_update(model.word_projection, gradients.d_word_projection,
                          state.grad_sq_word, state.update_sq_word, r, e);
  detail::adadelta_update(model.candidate_weights, gradients.d_candidate_weights,
                          state.grad_sq_cand, state.update_sq_cand, r, e);
  detail::adadelta_update(model.bias, gradients.d_bias, state.grad_sq_bias,
                          state.update_sq_bias, r, e);
}

template <class Scalar>
void sgd_step(LogLinearModel<Scalar>& model, const BatchGradients<Scalar>& gradients,
              double rate) {
  const auto lr = static_cast<Scalar>(rate);
  model.word_projection -= lr * gradients.d_word_projection;
  model.candidate_weights -= lr * gradients.d_candidate_weights;
  model.bias -= lr * gradients.d_bias;
}

template <class Scalar>
TrainResult<Scalar> train(const std::vector<Document>& documents, const Vocabulary& vocabulary,
                          const CandidateRegistry& registry, const TrainingConfig& config) {
  config.validate();

  std::vector<NGramInstance> instances;
  std::uint32_t d_max = 0;
  for (const auto& doc : documents) {
    if (doc.associations.empty() || doc.tokens.empty()) continue;
    d_max = std::max(d_max, static_cast<std::uint32_t>(doc.tokens.size()));
    auto extracted =
        extract_ngrams(doc, config.window, config.overlapping, vocabulary.pad_id());
    instances.insert(instances.end(), std::make_move_iterator(extracted.begin()),
                     std::make_move_iterator(extracted.end()));
  }
  if (instances.empty()) {
    throw InvalidArgument("no trainable instances: corpus has no associated documents");
  }

  auto [model, state] = initialize<Scalar>(vocabulary, registry, config.embedding_size,
                                           config.seed, config.init_embeddings);
  TrainResult<Scalar> result;
  result.log.reserve(config.epochs * (instances.size() / config.batch_size + 1));

  Rng rng(config.seed);
  std::vector<std::uint32_t> order(instances.size());
  std::size_t batch_index = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
    rng.shuffle(order);

    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, order.size() - start);
      BatchGradients<Scalar> gradients;
      const LossReport report = detail::evaluate_batch<Scalar>(
          model,
          [&](std::size_t i) -> const NGramInstance& { return instances[order[start + i]]; },
          count, config.weight_decay, d_max, &gradients);

      result.log.push_back({batch_index, report.total, report.cross_entropy_term,
                            report.regularization_term});
      ++batch_index;

      if (config.optimizer == TrainingConfig::Optimizer::Adadelta) {
        adadelta_step(model, gradients, state, config.adadelta_rho, config.adadelta_eps);
      } else {
        sgd_step(model, gradients, config.sgd_rate);
      }
    }
  }

  if (!model.all_finite()) {
    throw NumericError("training produced non-finite parameters");
  }
  result.model = std::move(model);
  return result;
}

}  // namespace sert
