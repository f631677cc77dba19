//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_MODEL_H_
#define ESIAUG_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esiaug/augment.h"
#include "esiaug/molgraph.h"

namespace esiaug {

// ---------------------------------------------------------------------------
// Featurization

inline constexpr int kAlphabetSize = 21;
inline constexpr int kEnzymeFeatures = kAlphabetSize + kAlphabetSize * kAlphabetSize;

/// Substrate descriptor layout. Every entry except kAtomTotal is a count
/// divided by the atom total.
namespace substrate_feature {
inline constexpr int kElement = 0;  // kElementCount bins in Element order
inline constexpr int kMasked = kElement + kElementCount;
inline constexpr int kBondSingle = kMasked + 1;
inline constexpr int kBondDouble = kBondSingle + 1;
inline constexpr int kBondTriple = kBondDouble + 1;
inline constexpr int kBondAromatic = kBondTriple + 1;
inline constexpr int kRingAtoms = kBondAromatic + 1;
inline constexpr int kDegree = kRingAtoms + 1;  // degrees 0, 1, 2, 3, 4+
inline constexpr int kChargeSum = kDegree + 5;
inline constexpr int kAtomTotal = kChargeSum + 1;
inline constexpr int kCount = kAtomTotal + 1;
}  // namespace substrate_feature

inline constexpr int kSubstrateFeatures = substrate_feature::kCount;

struct FeatureVector {
  std::string_view layout;
  std::vector<double> values;
};

inline constexpr std::string_view kEnzymeLayout = "enzyme-kmer-v1";
inline constexpr std::string_view kSubstrateLayout = "substrate-desc-v1";

/// Index of the 2-mer (a, b) inside the enzyme feature vector.
int enzyme_pair_index(char a, char b);

/// Length-normalized 1-mer (21 bins, MASK included) and 2-mer (441 bins)
/// counts.
FeatureVector featurize_enzyme(const EnzymeSeq &e);

/// Fixed-length descriptor. Masked atoms are counted only in the MASKED bin
/// in place of their element; structure-derived bins still include them.
FeatureVector featurize_substrate(
    const MolGraph &g, const std::optional<std::vector<bool>> &mask = {});

// ---------------------------------------------------------------------------
// Parameters

struct ModelShape {
  int enzyme_in = kEnzymeFeatures;
  int substrate_in = kSubstrateFeatures;
  int enzyme_hidden = 32;
  int substrate_hidden = 16;
  int embedding_dim = 64;

  friend bool operator==(const ModelShape &, const ModelShape &) = default;
};

struct TensorInfo {
  std::string_view name;
  int rows;
  int cols;
  std::size_t offset;
  // Input standardization tensors are fitted from data, not descended on.
  bool trainable = true;
};

/// All model tensors in one flat buffer. Matrices are row-major with `rows`
/// outputs and `cols` inputs. Each branch first standardizes its input as
/// (x - shift) * scale; shift and scale default to the identity.
class ModelParams {
public:
  ModelParams() = default;
  explicit ModelParams(const ModelShape &shape);

  const ModelShape &shape() const { return shape_; }
  const std::vector<TensorInfo> &tensors() const { return tensors_; }
  const TensorInfo &tensor(std::string_view name) const;

  std::vector<double> &data() { return data_; }
  const std::vector<double> &data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> view(const TensorInfo &t) {
    return { data_.data() + t.offset, static_cast<std::size_t>(t.rows) * t.cols };
  }
  std::span<const double> view(const TensorInfo &t) const {
    return { data_.data() + t.offset, static_cast<std::size_t>(t.rows) * t.cols };
  }

  bool all_finite() const;

  friend bool operator==(const ModelParams &a, const ModelParams &b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

private:
  ModelShape shape_;
  std::vector<TensorInfo> tensors_;
  std::vector<double> data_;
};

/// Glorot-uniform weights, zero biases and identity input scaling.
ModelParams init_params(const ModelShape &shape, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Forward pass and losses

struct ForwardResult {
  std::vector<double> embedding;
  double prediction = 0;
};

/// enzyme branch and substrate branch (affine + tanh each), concatenated,
/// fusion affine + tanh to the embedding, affine head to a scalar in log10
/// units. Throws NonFiniteError if any intermediate is not finite.
ForwardResult forward(const ModelParams &params, const FeatureVector &enzyme,
                      const FeatureVector &substrate);
ForwardResult forward(const ModelParams &params, const EsiPair &pair);

double loss_base(std::span<const double> preds,
                 std::span<const double> targets);

/// Squared Euclidean distance between embeddings.
double loss_cons(std::span<const double> f, std::span<const double> f_aug);

/// Mean of loss_cons over paired embeddings.
double loss_cons(std::span<const std::vector<double>> f,
                 std::span<const std::vector<double>> f_aug);

double loss_total(double base, double cons, double lambda);

inline constexpr double kDefaultLambda = 0.5;

// ---------------------------------------------------------------------------
// Gradients

/// One training example: raw-pair features, augmented-pair features and the
/// target. Only the raw pair feeds the prediction loss.
struct TrainingSample {
  const FeatureVector *enzyme;
  const FeatureVector *substrate;
  const FeatureVector *aug_enzyme;
  const FeatureVector *aug_substrate;
  double target;
};

struct LossOptions {
  double lambda = kDefaultLambda;
  // Compare unit-normalized embeddings in the consistency term.
  bool normalize_embeddings = false;
};

struct BatchLoss {
  double base = 0;
  double cons = 0;
  double total = 0;
};

/// Loss of a batch without gradients.
BatchLoss batch_loss(const ModelParams &params,
                     std::span<const TrainingSample> batch,
                     const LossOptions &opts);

/// Exact gradient of loss_total over the batch, zero on non-trainable
/// tensors. Per-sample gradients are computed in parallel and reduced
/// sequentially in sample order, so the result is bit-identical to
/// batch_gradients_serial. With lambda == 0 the augmented inputs are not
/// read.
std::vector<double> batch_gradients(const ModelParams &params,
                                    std::span<const TrainingSample> batch,
                                    const LossOptions &opts,
                                    BatchLoss *loss = nullptr);

/// Single-threaded reference for batch_gradients.
std::vector<double> batch_gradients_serial(
    const ModelParams &params, std::span<const TrainingSample> batch,
    const LossOptions &opts, BatchLoss *loss = nullptr);

// ---------------------------------------------------------------------------
// Training

inline constexpr double kMomentum = 0.9;

struct TrainConfig {
  double lambda = kDefaultLambda;
  double learning_rate = 0.005;
  int epochs = 60;
  int batch_size = 32;
  ModelShape shape;
  std::uint64_t seed = 0;
  bool normalize_embeddings = false;
  AugmentConfig augment;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0;
  double train_base = 0;
  double train_cons = 0;
  double val_r2 = 0;
  double val_mae = 0;
};

struct TrainResult {
  ModelParams params;  // best validation epoch
  std::vector<EpochLog> log;
  int best_epoch = 0;
  bool aborted = false;
  std::string diagnostic;
};

/// Featurized, parsed dataset ready for training or evaluation.
struct PreparedSet {
  std::vector<EsiPair> pairs;
  std::vector<FeatureVector> enzyme;
  std::vector<FeatureVector> substrate;

  std::size_t size() const { return pairs.size(); }
  std::vector<double> targets() const;
};

PreparedSet prepare(std::span<const EsiRecord> records);

std::vector<double> predict(const ModelParams &params, const PreparedSet &set);

/// Sets each branch's input shift and scale to the per-feature mean and
/// inverse standard deviation over `set`. Constant features keep scale 1.
void fit_input_scaling(ModelParams &params, const PreparedSet &set);

/// Momentum descent on loss_total. Each step augments its batch through
/// augment_pair with a stream derived from (seed, epoch, step, slot).
/// Returns the parameters of the best validation-R^2 epoch. A non-finite
/// loss stops training with `aborted` set and the last finite best kept.
TrainResult train(const PreparedSet &train_set, const PreparedSet &val_set,
                  const TrainConfig &cfg);

// ---------------------------------------------------------------------------
// Checkpoints

struct Checkpoint {
  ModelParams params;
  std::uint64_t seed = 0;
  int best_epoch = 0;
  std::string config_hash;
  std::vector<std::string> config_echo;  // "key=value" lines
};

void write_checkpoint(std::ostream &os, const Checkpoint &ckpt);
Checkpoint read_checkpoint(std::istream &is);

}  // namespace esiaug

#endif  // ESIAUG_MODEL_H_
