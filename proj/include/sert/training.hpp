#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sert/corpus.hpp"
#include "sert/model.hpp"
#include "sert/rng.hpp"
#include "sert/types.hpp"

namespace sert {

struct TrainingConfig {
  std::size_t window = 8;        // n-gram width
  std::size_t batch_size = 1024; // m
  double weight_decay = 0.01;    // lambda
  double adadelta_rho = 0.95;
  double adadelta_eps = 1e-6;
  std::size_t epochs = 1;
  bool overlapping = false;
  std::uint64_t seed = 42;
  std::size_t embedding_size = 300;  // e
  std::optional<std::string> init_embeddings;

  enum class Optimizer { Adadelta, Sgd };
  Optimizer optimizer = Optimizer::Adadelta;
  double sgd_rate = 0.1;

  void validate() const {
    if (window < 1) throw InvalidArgument("window must be >= 1");
    if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
    if (weight_decay < 0) throw InvalidArgument("weight decay must be >= 0");
    if (adadelta_rho <= 0 || adadelta_rho >= 1) throw InvalidArgument("rho must be in (0,1)");
    if (adadelta_eps <= 0) throw InvalidArgument("eps must be > 0");
    if (embedding_size < 1) throw InvalidArgument("embedding size must be >= 1");
    if (optimizer == Optimizer::Sgd && sgd_rate <= 0) {
      throw InvalidArgument("sgd rate must be > 0");
    }
  }
};

/// Adadelta accumulators: running squared gradients and squared updates,
/// one pair per parameter tensor.
template <class Scalar>
struct OptimizerState {
  using Matrix = typename LogLinearModel<Scalar>::Matrix;
  using Vector = typename LogLinearModel<Scalar>::Vector;

  Matrix grad_sq_word, update_sq_word;
  Matrix grad_sq_cand, update_sq_cand;
  Vector grad_sq_bias, update_sq_bias;

  static OptimizerState zeros_like(const LogLinearModel<Scalar>& model) {
    OptimizerState state;
    state.grad_sq_word = Matrix::Zero(model.word_projection.rows(), model.word_projection.cols());
    state.update_sq_word = state.grad_sq_word;
    state.grad_sq_cand =
        Matrix::Zero(model.candidate_weights.rows(), model.candidate_weights.cols());
    state.update_sq_cand = state.grad_sq_cand;
    state.grad_sq_bias = Vector::Zero(model.bias.size());
    state.update_sq_bias = state.grad_sq_bias;
    return state;
  }
};

/// Gradients of the batch loss. Word-projection columns of words absent from
/// the batch are zero before the weight-decay term is added.
template <class Scalar>
struct BatchGradients {
  typename LogLinearModel<Scalar>::Matrix d_word_projection;    // e x |V|
  typename LogLinearModel<Scalar>::Matrix d_candidate_weights;  // |C| x e
  typename LogLinearModel<Scalar>::Vector d_bias;               // |C|
  std::vector<TokenId> touched_words;                           // sorted, unique
};

struct LossReport {
  double cross_entropy_term = 0.0;
  double regularization_term = 0.0;
  double total = 0.0;
  std::size_t instances_seen = 0;
};

struct TrainLogEntry {
  std::size_t batch = 0;
  double loss = 0.0;
  double ce = 0.0;
  double reg = 0.0;
};

template <class Scalar>
struct TrainResult {
  LogLinearModel<Scalar> model;
  std::vector<TrainLogEntry> log;
};

/// Loads `<token> <v1> ... <ve>` lines and overwrites the projection columns
/// of tokens present in the model vocabulary. Returns the number of columns
/// written; a row of the wrong dimensionality raises ShapeError.
template <class Scalar>
std::size_t apply_pretrained_embeddings(LogLinearModel<Scalar>& model, const std::string& path);

/// Glorot-uniform initialization: entries of an r x c matrix are sampled
/// uniformly in +-sqrt(6/(r+c)); the bias starts at zero. Deterministic for
/// a fixed seed.
template <class Scalar>
std::pair<LogLinearModel<Scalar>, OptimizerState<Scalar>> initialize(
    const Vocabulary& vocabulary, const CandidateRegistry& registry, std::size_t embedding_size,
    std::uint64_t seed, const std::optional<std::string>& init_embeddings = std::nullopt);

/// Mean scaled cross-entropy over the batch plus the L2 penalty
/// (lambda / 2m) (|W_v|^2 + |W_c|^2); the bias is not regularized. Each
/// instance is weighted by |d_max| / |d| of its source document.
template <class Scalar>
LossReport batch_loss(const LogLinearModel<Scalar>& model, std::span<const NGramInstance> batch,
                      double lambda, std::uint32_t d_max);

/// Analytic gradients of batch_loss. For each instance with summed logits z,
/// prediction s = softmax(z) and target p, the per-logit gradient is
/// w (s - p) with w the document-length weight; it is chained into the bias
/// (factor n), the candidate matrix (outer product with the pooled word
/// vector) and the projection columns of the window's words. The weight
/// decay contributes (lambda/m) W_v and (lambda/m) W_c.
template <class Scalar>
BatchGradients<Scalar> batch_gradients(const LogLinearModel<Scalar>& model,
                                       std::span<const NGramInstance> batch, double lambda,
                                       std::uint32_t d_max);

/// One adadelta update:
///   Eg   <- rho Eg + (1-rho) g^2
///   step  = -sqrt(Ed + eps) / sqrt(Eg + eps) * g
///   Ed   <- rho Ed + (1-rho) step^2
///   theta <- theta + step
template <class Scalar>
void adadelta_step(LogLinearModel<Scalar>& model, const BatchGradients<Scalar>& gradients,
                   OptimizerState<Scalar>& state, double rho, double eps);

/// Plain SGD with a global rate; kept around for optimizer-independent
/// convergence checks.
template <class Scalar>
void sgd_step(LogLinearModel<Scalar>& model, const BatchGradients<Scalar>& gradients,
              double rate);

/// Full training run: extracts n-gram instances from every associated
/// document, shuffles them once per epoch (seeded), and consumes them in
/// batches of `batch_size` (the final short batch uses its true size).
/// |d_max| is measured over the training documents. Logs one entry per
/// batch with the pre-update loss.
template <class Scalar>
TrainResult<Scalar> train(const std::vector<Document>& documents, const Vocabulary& vocabulary,
                          const CandidateRegistry& registry, const TrainingConfig& config);

}  // namespace sert

#include "sert/training_impl.hpp"
