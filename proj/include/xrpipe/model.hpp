#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "xrpipe/image.hpp"

namespace xrp {

struct ConvSpec {
  int channels = 8;
  int kernel = 3;
  int stride = 2;

  bool operator==(const ConvSpec&) const = default;
};

/// Small fully-convolutional multi-label classifier: conv blocks with ReLU
/// (zero padding preserves size before the stride), global average pooling,
/// dense head, element-wise sigmoid.
struct ModelConfig {
  int input_size = 64;
  std::vector<ConvSpec> blocks = {{8, 3, 2}, {16, 3, 2}, {32, 3, 2}};
  int n_outputs = 8;
  uint64_t seed = 1;

  void validate() const;
};

struct ConvLayer {
  int in_ch = 0, out_ch = 0, kernel = 0, stride = 1;
  std::vector<double> w;  // [out_ch][in_ch][k][k]
  std::vector<double> b;  // [out_ch]
};

struct DenseLayer {
  int in_dim = 0, out_dim = 0;
  std::vector<double> w;  // [out_dim][in_dim]
  std::vector<double> b;  // [out_dim]
};

struct Model {
  ModelConfig cfg;
  std::vector<ConvLayer> convs;
  DenseLayer head;

  size_t param_count() const;
};

/// Gradient (and moment) tensors mirror the model parameter shapes.
struct Gradients {
  std::vector<std::vector<double>> conv_w, conv_b;
  std::vector<double> head_w, head_b;

  static Gradients zeros_like(const Model& m);
  bool all_finite() const;
};

struct AdamState {
  Gradients m1, m2;
  int64_t t = 0;

  static AdamState zeros_like(const Model& m);
};

struct TrainConfig {
  double lr = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 15;
  int max_epochs = 12;
  int plateau_patience = 3;
  double lr_factor = 0.5;
  double lr_min = 1e-5;
  double val_frac = 0.1;
  uint64_t seed = 0;

  void validate() const;
};

using ProbMatrix = std::vector<std::vector<double>>;   // [n][n_outputs]
using LabelMatrix = std::vector<std::vector<double>>;  // [n][n_outputs], 0/1

/// Deterministic He-style initialization: weights ~ N(0, 2/fan_in) drawn in
/// declared order from the config seed, biases zero.
Model init_model(const ModelConfig& cfg);

/// Forward pass. Inputs must be square and each block's stride must divide
/// the incoming size exactly; with global average pooling, sizes other than
/// cfg.input_size (e.g. five-crop windows) are fine.
ProbMatrix forward(const Model& m, const std::vector<Image>& batch);
std::vector<double> forward_one(const Model& m, const Image& img);

struct FeatureMap {
  int ch = 0, h = 0, w = 0;
  std::vector<double> v;

  void assign(int c, int hh, int ww) {
    ch = c;
    h = hh;
    w = ww;
    v.assign(size_t(c) * hh * ww, 0.0);
  }
  double* row(int c, int y) { return &v[(size_t(c) * h + y) * w]; }
  const double* row(int c, int y) const { return &v[(size_t(c) * h + y) * w]; }
};

/// Per-layer activations for a single sample; used by tests to compare
/// trunk behavior across head replacement.
struct ForwardTrace {
  std::vector<FeatureMap> activations;  // [0] = input, then post-ReLU maps
  std::vector<double> gap;
  std::vector<double> logits;
  std::vector<double> probs;
};
ForwardTrace forward_trace(const Model& m, const Image& img);

/// Mean over batch and outputs of the binary cross entropy, probabilities
/// clamped to [1e-7, 1 - 1e-7] before the logs.
double bce_loss(const ProbMatrix& probs, const LabelMatrix& labels);

/// Exact analytic gradient of bce_loss(forward(batch)) w.r.t. every
/// parameter. Returns the loss.
double backward(const Model& m, const std::vector<Image>& batch, const LabelMatrix& labels,
                Gradients& grads);

/// Bias-corrected ADAM update, in place. Throws NumericError (with the step
/// index) on non-finite gradients.
void adam_step(Model& m, AdamState& state, const Gradients& grads, const TrainConfig& tc);

/// New head with fresh seeded initialization; every non-head parameter is
/// preserved bit-exactly.
Model replace_head(const Model& m, int n_outputs, uint64_t seed);

/// Versioned binary checkpoint: architecture descriptor, parameter tensors
/// in declared order as little-endian float32, then the TrainConfig.
void save_model(const Model& m, const TrainConfig& tc, const std::filesystem::path& path);
struct Checkpoint {
  Model model;
  TrainConfig train;
};
Checkpoint load_model(const std::filesystem::path& path);

}  // namespace xrp
