//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Core>

#include "esiaug/error.h"
#include "esiaug/metrics.h"
#include "esiaug/parallel.h"
#include "esiaug/rng.h"

namespace esiaug {
namespace {
using Vec = Eigen::VectorXd;
using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Vec>;
using VecMap = Eigen::Map<Vec>;

// Tensor order inside the flat buffer.
enum TensorId {
  kEnzymeShift,
  kEnzymeScale,
  kSubstrateShift,
  kSubstrateScale,
  kEnzymeW,
  kEnzymeB,
  kSubstrateW,
  kSubstrateB,
  kFusionW,
  kFusionB,
  kHeadW,
  kHeadB,
  kTensorCount,
};

constexpr double kNormEpsilon = 1e-12;
constexpr double kMinFeatureStd = 1e-9;

bool finite(const Vec &v) { return v.allFinite(); }

void require_finite(const Vec &v, const char *what) {
  if (!finite(v))
    throw NonFiniteError(std::string("non-finite ") + what);
}

struct Layers {
  ConstVecMap e_shift, e_scale, s_shift, s_scale;
  ConstMatMap we, wf;
  ConstVecMap be, bf;
  ConstMatMap ws;
  ConstVecMap bs, wh;
  double bh;

  explicit Layers(const ModelParams &p)
      : e_shift(vec(p, kEnzymeShift)), e_scale(vec(p, kEnzymeScale)),
        s_shift(vec(p, kSubstrateShift)), s_scale(vec(p, kSubstrateScale)),
        we(mat(p, kEnzymeW)), wf(mat(p, kFusionW)), be(vec(p, kEnzymeB)),
        bf(vec(p, kFusionB)), ws(mat(p, kSubstrateW)),
        bs(vec(p, kSubstrateB)), wh(vec(p, kHeadW)),
        bh(p.data()[p.tensors()[kHeadB].offset]) { }

  static ConstMatMap mat(const ModelParams &p, int id) {
    const TensorInfo &t = p.tensors()[id];
    return ConstMatMap(p.data().data() + t.offset, t.rows, t.cols);
  }
  static ConstVecMap vec(const ModelParams &p, int id) {
    const TensorInfo &t = p.tensors()[id];
    return ConstVecMap(p.data().data() + t.offset, t.rows * t.cols);
  }
};

// Activations retained for the backward pass.
struct Trace {
  Vec xe, xs;  // standardized inputs
  Vec he, hs, f;
  double y = 0;
};

void check_inputs(const ModelShape &shape, const FeatureVector &enzyme,
                  const FeatureVector &substrate) {
  if (static_cast<int>(enzyme.values.size()) != shape.enzyme_in
      || static_cast<int>(substrate.values.size()) != shape.substrate_in)
    throw DimMismatch("feature length does not match the model shape");
}

Trace run_forward(const Layers &l, const ModelShape &shape,
                  const FeatureVector &enzyme, const FeatureVector &substrate) {
  check_inputs(shape, enzyme, substrate);
  Trace t;
  ConstVecMap xe(enzyme.values.data(), shape.enzyme_in);
  ConstVecMap xs(substrate.values.data(), shape.substrate_in);
  if (!xe.allFinite() || !xs.allFinite())
    throw NonFiniteError("non-finite input features");
  t.xe = (xe - l.e_shift).cwiseProduct(l.e_scale);
  t.xs = (xs - l.s_shift).cwiseProduct(l.s_scale);

  t.he = (l.we * t.xe + l.be).array().tanh();
  t.hs = (l.ws * t.xs + l.bs).array().tanh();
  require_finite(t.he, "enzyme activation");
  require_finite(t.hs, "substrate activation");

  const int ne = shape.enzyme_hidden;
  t.f = l.bf;
  t.f.noalias() += l.wf.leftCols(ne) * t.he;
  t.f.noalias() += l.wf.rightCols(shape.substrate_hidden) * t.hs;
  t.f = t.f.array().tanh();
  require_finite(t.f, "embedding");

  t.y = l.wh.dot(t.f) + l.bh;
  if (!std::isfinite(t.y))
    throw NonFiniteError("non-finite prediction");
  return t;
}

// Accumulates d(loss)/d(params) for one trace given the upstream gradients
// of the embedding and the prediction.
void backward(const Layers &l, const ModelParams &p, const Trace &t,
              const Vec &grad_f, double grad_y, std::vector<double> &out) {
  const ModelShape &shape = p.shape();
  const auto &ts = p.tensors();
  auto gmat = [&](int id) {
    return MatMap(out.data() + ts[id].offset, ts[id].rows, ts[id].cols);
  };
  auto gvec = [&](int id) {
    return VecMap(out.data() + ts[id].offset, ts[id].rows * ts[id].cols);
  };

  Vec gf = grad_f;
  if (grad_y != 0.0) {
    gvec(kHeadW) += grad_y * t.f;
    out[ts[kHeadB].offset] += grad_y;
    gf += grad_y * l.wh;
  }

  const Vec gzf = gf.array() * (1.0 - t.f.array().square());
  const int ne = shape.enzyme_hidden, ns = shape.substrate_hidden;
  MatMap gwf = gmat(kFusionW);
  gwf.leftCols(ne).noalias() += gzf * t.he.transpose();
  gwf.rightCols(ns).noalias() += gzf * t.hs.transpose();
  gvec(kFusionB) += gzf;

  const Vec gze = (l.wf.leftCols(ne).transpose() * gzf).array()
                  * (1.0 - t.he.array().square());
  const Vec gzs = (l.wf.rightCols(ns).transpose() * gzf).array()
                  * (1.0 - t.hs.array().square());

  gmat(kEnzymeW).noalias() += gze * t.xe.transpose();
  gvec(kEnzymeB) += gze;
  gmat(kSubstrateW).noalias() += gzs * t.xs.transpose();
  gvec(kSubstrateB) += gzs;
}

struct SampleResult {
  std::vector<double> grad;
  double base = 0;
  double cons = 0;
};

// Consistency distance and its gradient with respect to f (the gradient with
// respect to f_aug is obtained by swapping arguments).
double cons_term(const Vec &f, const Vec &g, bool normalize, Vec *grad_f,
                 Vec *grad_g) {
  if (!normalize) {
    const Vec d = f - g;
    if (grad_f)
      *grad_f = 2.0 * d;
    if (grad_g)
      *grad_g = -2.0 * d;
    return d.squaredNorm();
  }
  const double nf = std::sqrt(f.squaredNorm() + kNormEpsilon);
  const double ng = std::sqrt(g.squaredNorm() + kNormEpsilon);
  const Vec u = f / nf, v = g / ng;
  const Vec d = u - v;
  // d/df of u = I/nf - f f^T / nf^3.
  if (grad_f) {
    const Vec gu = 2.0 * d;
    *grad_f = gu / nf - f * (f.dot(gu) / (nf * nf * nf));
  }
  if (grad_g) {
    const Vec gv = -2.0 * d;
    *grad_g = gv / ng - g * (g.dot(gv) / (ng * ng * ng));
  }
  return d.squaredNorm();
}

SampleResult sample_gradient(const Layers &l, const ModelParams &p,
                             const TrainingSample &s, double scale,
                             const LossOptions &opts, bool want_grad) {
  SampleResult r;
  const Trace raw = run_forward(l, p.shape(), *s.enzyme, *s.substrate);
  const double err = raw.y - s.target;
  r.base = err * err;
  if (want_grad)
    r.grad.assign(p.size(), 0.0);

  if (opts.lambda == 0.0) {
    if (want_grad)
      backward(l, p, raw, Vec::Zero(raw.f.size()), scale * 2.0 * err, r.grad);
    return r;
  }

  const Trace aug =
      run_forward(l, p.shape(), *s.aug_enzyme, *s.aug_substrate);
  Vec gf, ga;
  r.cons = cons_term(raw.f, aug.f, opts.normalize_embeddings,
                     want_grad ? &gf : nullptr, want_grad ? &ga : nullptr);
  if (want_grad) {
    const double w = scale * opts.lambda;
    backward(l, p, raw, w * gf, scale * 2.0 * err, r.grad);
    backward(l, p, aug, w * ga, 0.0, r.grad);
  }
  return r;
}

template <class Runner>
std::vector<double> gradients_impl(const ModelParams &params,
                                   std::span<const TrainingSample> batch,
                                   const LossOptions &opts, BatchLoss *loss,
                                   Runner &&run) {
  if (batch.empty())
    throw EmptyDataset("empty batch");
  if (!(opts.lambda >= 0.0) || !std::isfinite(opts.lambda))
    throw ConfigError("lambda must be finite and non-negative");
  if (!params.all_finite())
    throw NonFiniteError("non-finite parameters");

  const Layers layers(params);
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<SampleResult> per(batch.size());
  run(static_cast<std::ptrdiff_t>(batch.size()), [&](std::ptrdiff_t i) {
    per[i] = sample_gradient(layers, params, batch[i], scale, opts, true);
  });

  std::vector<double> grad(params.size(), 0.0);
  BatchLoss bl;
  for (const SampleResult &r: per) {
    for (std::size_t k = 0; k < grad.size(); ++k)
      grad[k] += r.grad[k];
    bl.base += r.base;
    bl.cons += r.cons;
  }
  bl.base *= scale;
  bl.cons *= scale;
  bl.total = loss_total(bl.base, bl.cons, opts.lambda);
  for (double g: grad)
    if (!std::isfinite(g))
      throw NonFiniteError("non-finite gradient");
  if (loss)
    *loss = bl;
  return grad;
}

void serial_for(std::ptrdiff_t n, const auto &fn) {
  for (std::ptrdiff_t i = 0; i < n; ++i)
    fn(i);
}
}  // namespace

// ---------------------------------------------------------------------------
// Featurization

int enzyme_pair_index(char a, char b) {
  const int ia = EnzymeSeq::symbol_index(a), ib = EnzymeSeq::symbol_index(b);
  if (ia < 0 || ib < 0)
    throw SequenceError(std::string("unknown residue pair ") + a + b);
  return kAlphabetSize + ia * kAlphabetSize + ib;
}

FeatureVector featurize_enzyme(const EnzymeSeq &e) {
  FeatureVector fv { kEnzymeLayout, std::vector<double>(kEnzymeFeatures, 0.0) };
  const std::size_t n = e.size();
  if (n == 0)
    return fv;
  for (std::size_t i = 0; i < n; ++i)
    fv.values[EnzymeSeq::symbol_index(e[i])] += 1.0;
  for (int k = 0; k < kAlphabetSize; ++k)
    fv.values[k] /= static_cast<double>(n);
  if (n > 1) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      fv.values[enzyme_pair_index(e[i], e[i + 1])] += 1.0;
    for (int k = kAlphabetSize; k < kEnzymeFeatures; ++k)
      fv.values[k] /= static_cast<double>(n - 1);
  }
  return fv;
}

FeatureVector featurize_substrate(const MolGraph &g,
                                  const std::optional<std::vector<bool>> &mask) {
  namespace sf = substrate_feature;
  const int n = g.size();
  if (mask && static_cast<int>(mask->size()) != n)
    throw DimMismatch("atom mask length does not match the graph");

  FeatureVector fv { kSubstrateLayout,
                     std::vector<double>(kSubstrateFeatures, 0.0) };
  std::vector<double> &v = fv.values;
  int charge = 0;
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    if (mask && (*mask)[i])
      v[sf::kMasked] += 1;
    else
      v[sf::kElement + static_cast<int>(a.element)] += 1;
    if (g.ring_membership()[i])
      v[sf::kRingAtoms] += 1;
    v[sf::kDegree + std::min(g.degree(i), 4)] += 1;
    charge += a.formal_charge;
  }
  for (const Bond &b: g.bonds())
    v[sf::kBondSingle + static_cast<int>(b.order) - 1] += 1;
  v[sf::kChargeSum] = charge;

  if (n > 0)
    for (int k = 0; k < sf::kAtomTotal; ++k)
      v[k] /= static_cast<double>(n);
  v[sf::kAtomTotal] = n;
  return fv;
}

// ---------------------------------------------------------------------------
// Parameters

ModelParams::ModelParams(const ModelShape &shape): shape_(shape) {
  const int cat = shape.enzyme_hidden + shape.substrate_hidden;
  const struct {
    std::string_view name;
    int rows, cols;
    bool trainable;
  } layout[kTensorCount] = {
    { "enzyme.input_shift", shape.enzyme_in, 1, false },
    { "enzyme.input_scale", shape.enzyme_in, 1, false },
    { "substrate.input_shift", shape.substrate_in, 1, false },
    { "substrate.input_scale", shape.substrate_in, 1, false },
    { "enzyme.weight", shape.enzyme_hidden, shape.enzyme_in, true },
    { "enzyme.bias", shape.enzyme_hidden, 1, true },
    { "substrate.weight", shape.substrate_hidden, shape.substrate_in, true },
    { "substrate.bias", shape.substrate_hidden, 1, true },
    { "fusion.weight", shape.embedding_dim, cat, true },
    { "fusion.bias", shape.embedding_dim, 1, true },
    { "head.weight", shape.embedding_dim, 1, true },
    { "head.bias", 1, 1, true },
  };
  std::size_t offset = 0;
  for (const auto &t: layout) {
    if (t.rows <= 0 || t.cols <= 0)
      throw ConfigError("model dimensions must be positive");
    tensors_.push_back({ t.name, t.rows, t.cols, offset, t.trainable });
    offset += static_cast<std::size_t>(t.rows) * t.cols;
  }
  data_.assign(offset, 0.0);
  for (int id: { kEnzymeScale, kSubstrateScale })
    for (double &x: view(tensors_[id]))
      x = 1.0;
}

const TensorInfo &ModelParams::tensor(std::string_view name) const {
  for (const TensorInfo &t: tensors_)
    if (t.name == name)
      return t;
  throw ConfigError("unknown tensor '" + std::string(name) + "'");
}

bool ModelParams::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

ModelParams init_params(const ModelShape &shape, std::uint64_t seed) {
  ModelParams p(shape);
  Rng rng(seed);
  for (const TensorInfo &t: p.tensors()) {
    if (!t.trainable || t.name.ends_with(".bias"))
      continue;
    // head.weight is stored as a column but maps embedding_dim -> 1.
    const int fan_in = t.name == "head.weight" ? t.rows : t.cols;
    const int fan_out = t.name == "head.weight" ? 1 : t.rows;
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double &w: p.view(t))
      w = rng.uniform(-limit, limit);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Forward pass and losses

ForwardResult forward(const ModelParams &params, const FeatureVector &enzyme,
                      const FeatureVector &substrate) {
  if (!params.all_finite())
    throw NonFiniteError("non-finite parameters");
  Trace t = run_forward(Layers(params), params.shape(), enzyme, substrate);
  return { std::vector<double>(t.f.data(), t.f.data() + t.f.size()), t.y };
}

ForwardResult forward(const ModelParams &params, const EsiPair &pair) {
  return forward(params, featurize_enzyme(pair.enzyme),
                 featurize_substrate(pair.substrate, pair.substrate_mask));
}

double loss_base(std::span<const double> preds,
                 std::span<const double> targets) {
  if (preds.size() != targets.size() || preds.empty())
    throw LengthMismatch("loss_base needs equal non-zero lengths");
  double s = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = preds[i] - targets[i];
    s += d * d;
  }
  return s / static_cast<double>(preds.size());
}

double loss_cons(std::span<const double> f, std::span<const double> f_aug) {
  if (f.size() != f_aug.size())
    throw DimMismatch("embedding dimensions differ");
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] - f_aug[i];
    s += d * d;
  }
  return s;
}

double loss_cons(std::span<const std::vector<double>> f,
                 std::span<const std::vector<double>> f_aug) {
  if (f.size() != f_aug.size() || f.empty())
    throw LengthMismatch("loss_cons needs equal non-zero batch sizes");
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += loss_cons(f[i], f_aug[i]);
  return s / static_cast<double>(f.size());
}

double loss_total(double base, double cons, double lambda) {
  return base + lambda * cons;
}

// ---------------------------------------------------------------------------
// Gradients

BatchLoss batch_loss(const ModelParams &params,
                     std::span<const TrainingSample> batch,
                     const LossOptions &opts) {
  if (batch.empty())
    throw EmptyDataset("empty batch");
  const Layers layers(params);
  const double scale = 1.0 / static_cast<double>(batch.size());
  BatchLoss bl;
  for (const TrainingSample &s: batch) {
    SampleResult r = sample_gradient(layers, params, s, scale, opts, false);
    bl.base += r.base;
    bl.cons += r.cons;
  }
  bl.base *= scale;
  bl.cons *= scale;
  bl.total = loss_total(bl.base, bl.cons, opts.lambda);
  return bl;
}

std::vector<double> batch_gradients(const ModelParams &params,
                                    std::span<const TrainingSample> batch,
                                    const LossOptions &opts, BatchLoss *loss) {
  return gradients_impl(params, batch, opts, loss,
                        [](std::ptrdiff_t n, const auto &fn) {
                          parallel_for(n, fn);
                        });
}

std::vector<double> batch_gradients_serial(
    const ModelParams &params, std::span<const TrainingSample> batch,
    const LossOptions &opts, BatchLoss *loss) {
  return gradients_impl(params, batch, opts, loss,
                        [](std::ptrdiff_t n, const auto &fn) {
                          serial_for(n, fn);
                        });
}

// ---------------------------------------------------------------------------
// Training

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be finite and non-negative");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be positive");
  if (epochs < 1)
    throw ConfigError("epochs must be at least 1");
  if (batch_size < 1)
    throw ConfigError("batch_size must be at least 1");
  if (shape.enzyme_hidden < 1 || shape.substrate_hidden < 1
      || shape.embedding_dim < 1)
    throw ConfigError("hidden sizes must be positive");
  if (shape.enzyme_in != kEnzymeFeatures
      || shape.substrate_in != kSubstrateFeatures)
    throw ConfigError("input sizes must match the featurizers");
  augment.validate();
}

std::vector<double> PreparedSet::targets() const {
  std::vector<double> t(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    t[i] = pairs[i].target;
  return t;
}

PreparedSet prepare(std::span<const EsiRecord> records) {
  PreparedSet set;
  set.pairs.resize(records.size());
  set.enzyme.resize(records.size());
  set.substrate.resize(records.size());
  parallel_for(static_cast<std::ptrdiff_t>(records.size()),
               [&](std::ptrdiff_t i) {
                 set.pairs[i] = pair_from_record(records[i]);
                 set.enzyme[i] = featurize_enzyme(set.pairs[i].enzyme);
                 set.substrate[i] = featurize_substrate(
                     set.pairs[i].substrate, set.pairs[i].substrate_mask);
               });
  return set;
}

std::vector<double> predict(const ModelParams &params, const PreparedSet &set) {
  if (!params.all_finite())
    throw NonFiniteError("non-finite parameters");
  const Layers layers(params);
  std::vector<double> out(set.size());
  parallel_for(static_cast<std::ptrdiff_t>(set.size()), [&](std::ptrdiff_t i) {
    out[i] =
        run_forward(layers, params.shape(), set.enzyme[i], set.substrate[i]).y;
  });
  return out;
}

void fit_input_scaling(ModelParams &params, const PreparedSet &set) {
  if (set.size() == 0)
    throw EmptyDataset("cannot fit input scaling on an empty set");
  auto fit = [&](const std::vector<FeatureVector> &xs, int shift_id,
                 int scale_id) {
    std::span<double> shift = params.view(params.tensors()[shift_id]);
    std::span<double> scale = params.view(params.tensors()[scale_id]);
    const double n = static_cast<double>(xs.size());
    for (std::size_t k = 0; k < shift.size(); ++k) {
      double mean = 0;
      for (const FeatureVector &x: xs)
        mean += x.values[k];
      mean /= n;
      double var = 0;
      for (const FeatureVector &x: xs)
        var += (x.values[k] - mean) * (x.values[k] - mean);
      shift[k] = mean;
      const double sd = std::sqrt(var / n);
      scale[k] = sd > kMinFeatureStd ? 1.0 / sd : 1.0;
    }
  };
  fit(set.enzyme, kEnzymeShift, kEnzymeScale);
  fit(set.substrate, kSubstrateShift, kSubstrateScale);
}

TrainResult train(const PreparedSet &train_set, const PreparedSet &val_set,
                  const TrainConfig &cfg) {
  cfg.validate();
  if (train_set.size() == 0)
    throw EmptyDataset("training set is empty");

  const PreparedSet &select = val_set.size() >= 2 ? val_set : train_set;
  const std::vector<double> select_targets = select.targets();
  const LossOptions opts { cfg.lambda, cfg.normalize_embeddings };

  TrainResult result;
  ModelParams params = init_params(cfg.shape, derive_seed(cfg.seed, { 0 }));
  fit_input_scaling(params, train_set);
  result.params = params;
  std::vector<double> velocity(params.size(), 0.0);
  double best_r2 = -std::numeric_limits<double>::infinity();

  const std::size_t n = train_set.size();
  const std::size_t batch = std::min<std::size_t>(cfg.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<FeatureVector> aug_e(batch), aug_s(batch);
  std::vector<TrainingSample> samples;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffler(derive_seed(cfg.seed, { 1, static_cast<std::uint64_t>(epoch) }));
    shuffler.shuffle(order);

    EpochLog log;
    log.epoch = epoch;
    try {
      std::size_t step = 0;
      for (std::size_t start = 0; start < n; start += batch, ++step) {
        const std::size_t size = std::min(batch, n - start);
        parallel_for(static_cast<std::ptrdiff_t>(size), [&](std::ptrdiff_t k) {
          Rng rng(derive_seed(cfg.seed, { 2, static_cast<std::uint64_t>(epoch),
                                          step, static_cast<std::uint64_t>(k) }));
          const std::size_t idx = order[start + k];
          EsiPair aug = augment_pair(train_set.pairs[idx], cfg.augment, rng);
          aug_e[k] = featurize_enzyme(aug.enzyme);
          aug_s[k] = featurize_substrate(aug.substrate, aug.substrate_mask);
        });

        samples.clear();
        for (std::size_t k = 0; k < size; ++k) {
          const std::size_t idx = order[start + k];
          samples.push_back({ &train_set.enzyme[idx], &train_set.substrate[idx],
                              &aug_e[k], &aug_s[k],
                              train_set.pairs[idx].target });
        }

        BatchLoss bl;
        std::vector<double> grad = batch_gradients(params, samples, opts, &bl);
        if (!std::isfinite(bl.total))
          throw NonFiniteError("non-finite batch loss");
        for (std::size_t k = 0; k < params.size(); ++k) {
          velocity[k] = kMomentum * velocity[k] - cfg.learning_rate * grad[k];
          params.data()[k] += velocity[k];
        }
        if (!params.all_finite())
          throw NonFiniteError("parameters diverged");

        const double w = static_cast<double>(size);
        log.train_loss += w * bl.total;
        log.train_base += w * bl.base;
        log.train_cons += w * bl.cons;
      }
      log.train_loss /= static_cast<double>(n);
      log.train_base /= static_cast<double>(n);
      log.train_cons /= static_cast<double>(n);

      std::vector<double> preds = predict(params, select);
      log.val_mae = mae(preds, select_targets);
      log.val_r2 = r_squared(preds, select_targets);
    } catch (const NonFiniteError &e) {
      result.aborted = true;
      result.diagnostic =
          "epoch " + std::to_string(epoch) + ": " + std::string(e.what());
      break;
    }

    result.log.push_back(log);
    if (log.val_r2 > best_r2) {
      best_r2 = log.val_r2;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

}  // namespace esiaug
