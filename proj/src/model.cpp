#include "xrpipe/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "xrpipe/errors.hpp"
#include "xrpipe/rng.hpp"
#include "xrpipe/util.hpp"

namespace xrp {

namespace {

constexpr double kProbClamp = 1e-7;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_conv_shapes(const ModelConfig& cfg) {
  if (cfg.n_outputs < 1) throw ConfigError("model: n_outputs must be >= 1");
  if (cfg.blocks.empty()) throw ConfigError("model: need at least one conv block");
  int s = cfg.input_size;
  if (s < 1) throw ConfigError("model: input_size must be >= 1");
  for (const ConvSpec& b : cfg.blocks) {
    if (b.channels < 1 || b.stride < 1 || b.kernel < 1 || b.kernel % 2 == 0)
      throw ConfigError("model: conv blocks need channels/stride >= 1 and odd kernel");
    if (s % b.stride != 0)
      throw ConfigError("model: incompatible stride schedule, size " + std::to_string(s) +
                        " not divisible by stride " + std::to_string(b.stride));
    s /= b.stride;
  }
}

void conv_forward(const ConvLayer& L, const FeatureMap& in, FeatureMap& out, bool relu) {
  const int k = L.kernel, s = L.stride, p = (k - 1) / 2;
  const int ih = in.h, iw = in.w;
  const int oh = ih / s, ow = iw / s;
  out.assign(L.out_ch, oh, ow);
  for (int oc = 0; oc < L.out_ch; ++oc) {
    for (int oy = 0; oy < oh; ++oy) {
      double* orow = out.row(oc, oy);
      for (int ox = 0; ox < ow; ++ox) orow[ox] = L.b[oc];
      for (int ic = 0; ic < L.in_ch; ++ic) {
        const double* wbase = &L.w[(size_t(oc) * L.in_ch + ic) * k * k];
        for (int ky = 0; ky < k; ++ky) {
          const int iy = oy * s - p + ky;
          if (iy < 0 || iy >= ih) continue;
          const double* irow = in.row(ic, iy);
          for (int kx = 0; kx < k; ++kx) {
            const double wv = wbase[ky * k + kx];
            const int off = kx - p;
            int lo = 0;
            while (lo * s + off < 0) ++lo;
            int hi = ow - 1;
            while (hi >= 0 && hi * s + off >= iw) --hi;
            for (int ox = lo; ox <= hi; ++ox) orow[ox] += wv * irow[ox * s + off];
          }
        }
      }
      if (relu)
        for (int ox = 0; ox < ow; ++ox) orow[ox] = std::max(0.0, orow[ox]);
    }
  }
}

// dW/db/dIn for one sample; d_out must already be masked by this layer's
// ReLU. d_in may be null for the input layer.
void conv_backward(const ConvLayer& L, const FeatureMap& in, const FeatureMap& d_out,
                   std::vector<double>& d_w, std::vector<double>& d_b, FeatureMap* d_in) {
  const int k = L.kernel, s = L.stride, p = (k - 1) / 2;
  const int ih = in.h, iw = in.w;
  const int oh = d_out.h, ow = d_out.w;
  if (d_in) d_in->assign(L.in_ch, ih, iw);
  for (int oc = 0; oc < L.out_ch; ++oc) {
    double db = 0.0;
    for (int oy = 0; oy < oh; ++oy) {
      const double* gr = d_out.row(oc, oy);
      for (int ox = 0; ox < ow; ++ox) db += gr[ox];
    }
    d_b[oc] += db;
    for (int ic = 0; ic < L.in_ch; ++ic) {
      double* dwbase = &d_w[(size_t(oc) * L.in_ch + ic) * k * k];
      const double* wbase = &L.w[(size_t(oc) * L.in_ch + ic) * k * k];
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          const int off = kx - p;
          int lo = 0;
          while (lo * s + off < 0) ++lo;
          int hi = ow - 1;
          while (hi >= 0 && hi * s + off >= iw) --hi;
          double dw = 0.0;
          const double wv = wbase[ky * k + kx];
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * s - p + ky;
            if (iy < 0 || iy >= ih) continue;
            const double* irow = in.row(ic, iy);
            const double* gr = d_out.row(oc, oy);
            double* dirow = d_in ? d_in->row(ic, iy) : nullptr;
            for (int ox = lo; ox <= hi; ++ox) {
              dw += gr[ox] * irow[ox * s + off];
              if (dirow) dirow[ox * s + off] += wv * gr[ox];
            }
          }
          dwbase[ky * k + kx] += dw;
        }
      }
    }
  }
}

FeatureMap image_to_map(const Image& img) {
  FeatureMap fm;
  fm.assign(1, img.height, img.width);
  fm.v = img.data;
  return fm;
}

struct SampleTrace {
  std::vector<FeatureMap> acts;  // acts[0] = input, acts[i+1] = post-ReLU conv i
  std::vector<double> gap;
  std::vector<double> logits;
  std::vector<double> probs;
};

SampleTrace run_forward(const Model& m, const Image& img) {
  if (img.width != img.height)
    throw DataError("forward: inputs must be square, got " + std::to_string(img.width) + "x" +
                    std::to_string(img.height));
  int s = img.width;
  for (const ConvLayer& L : m.convs) {
    if (s < 1 || s % L.stride != 0)
      throw DataError("forward: input size " + std::to_string(img.width) +
                      " incompatible with stride schedule");
    s /= L.stride;
  }
  SampleTrace tr;
  tr.acts.resize(m.convs.size() + 1);
  tr.acts[0] = image_to_map(img);
  for (size_t i = 0; i < m.convs.size(); ++i)
    conv_forward(m.convs[i], tr.acts[i], tr.acts[i + 1], /*relu=*/true);

  const FeatureMap& last = tr.acts.back();
  const double inv_area = 1.0 / (static_cast<double>(last.h) * last.w);
  tr.gap.assign(last.ch, 0.0);
  for (int c = 0; c < last.ch; ++c) {
    double acc = 0.0;
    const double* base = last.row(c, 0);
    for (int i = 0; i < last.h * last.w; ++i) acc += base[i];
    tr.gap[c] = acc * inv_area;
  }
  tr.logits.assign(m.head.out_dim, 0.0);
  tr.probs.assign(m.head.out_dim, 0.0);
  for (int o = 0; o < m.head.out_dim; ++o) {
    double acc = m.head.b[o];
    const double* wrow = &m.head.w[size_t(o) * m.head.in_dim];
    for (int c = 0; c < m.head.in_dim; ++c) acc += wrow[c] * tr.gap[c];
    tr.logits[o] = acc;
    tr.probs[o] = sigmoid(acc);
  }
  return tr;
}

void init_dense(DenseLayer& head, Rng& rng) {
  const double stddev = std::sqrt(2.0 / head.in_dim);
  head.w.resize(size_t(head.out_dim) * head.in_dim);
  head.b.assign(head.out_dim, 0.0);
  for (double& w : head.w) w = stddev * rng.normal();
}

}  // namespace

void ModelConfig::validate() const { check_conv_shapes(*this); }

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train: lr must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0)
    throw ConfigError("train: betas must lie in [0, 1)");
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
  if (plateau_patience < 1) throw ConfigError("train: plateau_patience must be >= 1");
  if (!(lr_factor > 0.0 && lr_factor < 1.0)) throw ConfigError("train: lr_factor must lie in (0,1)");
  if (val_frac < 0.0 || val_frac >= 1.0) throw ConfigError("train: val_frac must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("train: epsilon must be positive");
}

size_t Model::param_count() const {
  size_t n = head.w.size() + head.b.size();
  for (const ConvLayer& c : convs) n += c.w.size() + c.b.size();
  return n;
}

Gradients Gradients::zeros_like(const Model& m) {
  Gradients g;
  g.conv_w.reserve(m.convs.size());
  g.conv_b.reserve(m.convs.size());
  for (const ConvLayer& c : m.convs) {
    g.conv_w.emplace_back(c.w.size(), 0.0);
    g.conv_b.emplace_back(c.b.size(), 0.0);
  }
  g.head_w.assign(m.head.w.size(), 0.0);
  g.head_b.assign(m.head.b.size(), 0.0);
  return g;
}

bool Gradients::all_finite() const {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  for (const auto& v : conv_w)
    if (!ok(v)) return false;
  for (const auto& v : conv_b)
    if (!ok(v)) return false;
  return ok(head_w) && ok(head_b);
}

AdamState AdamState::zeros_like(const Model& m) {
  return AdamState{Gradients::zeros_like(m), Gradients::zeros_like(m), 0};
}

Model init_model(const ModelConfig& cfg) {
  cfg.validate();
  Model m;
  m.cfg = cfg;
  Rng rng(cfg.seed);
  int in_ch = 1;
  for (const ConvSpec& spec : cfg.blocks) {
    ConvLayer L;
    L.in_ch = in_ch;
    L.out_ch = spec.channels;
    L.kernel = spec.kernel;
    L.stride = spec.stride;
    const int fan_in = in_ch * spec.kernel * spec.kernel;
    const double stddev = std::sqrt(2.0 / fan_in);
    L.w.resize(size_t(L.out_ch) * L.in_ch * L.kernel * L.kernel);
    for (double& w : L.w) w = stddev * rng.normal();
    L.b.assign(L.out_ch, 0.0);
    m.convs.push_back(std::move(L));
    in_ch = spec.channels;
  }
  m.head.in_dim = in_ch;
  m.head.out_dim = cfg.n_outputs;
  init_dense(m.head, rng);
  return m;
}

std::vector<double> forward_one(const Model& m, const Image& img) {
  return run_forward(m, img).probs;
}

ProbMatrix forward(const Model& m, const std::vector<Image>& batch) {
  ProbMatrix out;
  out.reserve(batch.size());
  for (const Image& img : batch) out.push_back(forward_one(m, img));
  return out;
}

ForwardTrace forward_trace(const Model& m, const Image& img) {
  SampleTrace tr = run_forward(m, img);
  return ForwardTrace{std::move(tr.acts), std::move(tr.gap), std::move(tr.logits),
                      std::move(tr.probs)};
}

double bce_loss(const ProbMatrix& probs, const LabelMatrix& labels) {
  if (probs.size() != labels.size() || probs.empty())
    throw DataError("bce_loss: probs/labels shape mismatch");
  double acc = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != labels[i].size()) throw DataError("bce_loss: row shape mismatch");
    for (size_t j = 0; j < probs[i].size(); ++j) {
      const double p = std::clamp(probs[i][j], kProbClamp, 1.0 - kProbClamp);
      const double y = labels[i][j];
      acc += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

double backward(const Model& m, const std::vector<Image>& batch, const LabelMatrix& labels,
                Gradients& grads) {
  if (batch.size() != labels.size() || batch.empty())
    throw DataError("backward: batch/labels shape mismatch");
  grads = Gradients::zeros_like(m);
  const size_t n_layers = m.convs.size();
  const double denom = static_cast<double>(batch.size()) * m.head.out_dim;
  double loss = 0.0;

  for (size_t bi = 0; bi < batch.size(); ++bi) {
    if (labels[bi].size() != size_t(m.head.out_dim))
      throw DataError("backward: label row width mismatch");
    SampleTrace tr = run_forward(m, batch[bi]);

    std::vector<double> dlogit(m.head.out_dim, 0.0);
    for (int o = 0; o < m.head.out_dim; ++o) {
      const double p = tr.probs[o];
      const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
      const double y = labels[bi][o];
      loss += -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc)) / denom;
      // The clamp flattens the loss outside [eps, 1-eps]; the exact
      // derivative there is zero.
      dlogit[o] = (p > kProbClamp && p < 1.0 - kProbClamp) ? (p - y) / denom : 0.0;
    }

    const FeatureMap& last = tr.acts.back();
    std::vector<double> dgap(m.head.in_dim, 0.0);
    for (int o = 0; o < m.head.out_dim; ++o) {
      const double* wrow = &m.head.w[size_t(o) * m.head.in_dim];
      double* gw = &grads.head_w[size_t(o) * m.head.in_dim];
      for (int c = 0; c < m.head.in_dim; ++c) {
        gw[c] += dlogit[o] * tr.gap[c];
        dgap[c] += dlogit[o] * wrow[c];
      }
      grads.head_b[o] += dlogit[o];
    }

    // GAP spreads each channel gradient uniformly; apply last ReLU mask.
    FeatureMap d_act;
    d_act.assign(last.ch, last.h, last.w);
    const double inv_area = 1.0 / (static_cast<double>(last.h) * last.w);
    for (int c = 0; c < last.ch; ++c) {
      const double g = dgap[c] * inv_area;
      const double* a = last.row(c, 0);
      double* d = d_act.row(c, 0);
      for (int i = 0; i < last.h * last.w; ++i) d[i] = a[i] > 0.0 ? g : 0.0;
    }

    for (size_t li = n_layers; li-- > 0;) {
      FeatureMap d_in;
      const bool need_din = li > 0;
      conv_backward(m.convs[li], tr.acts[li], d_act, grads.conv_w[li], grads.conv_b[li],
                    need_din ? &d_in : nullptr);
      if (need_din) {
        // Mask by the previous layer's ReLU.
        const FeatureMap& prev = tr.acts[li];
        for (size_t i = 0; i < d_in.v.size(); ++i)
          if (!(prev.v[i] > 0.0)) d_in.v[i] = 0.0;
        d_act = std::move(d_in);
      }
    }
  }
  return loss;
}

void adam_step(Model& m, AdamState& state, const Gradients& grads, const TrainConfig& tc) {
  if (!grads.all_finite())
    throw NumericError("adam_step: non-finite gradient at step " + std::to_string(state.t + 1));
  state.t += 1;
  const double bc1 = 1.0 - std::pow(tc.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(tc.beta2, static_cast<double>(state.t));
  auto update = [&](std::vector<double>& theta, std::vector<double>& m1, std::vector<double>& m2,
                    const std::vector<double>& g) {
    if (theta.size() != g.size()) throw DataError("adam_step: gradient shape mismatch");
    for (size_t i = 0; i < theta.size(); ++i) {
      m1[i] = tc.beta1 * m1[i] + (1.0 - tc.beta1) * g[i];
      m2[i] = tc.beta2 * m2[i] + (1.0 - tc.beta2) * g[i] * g[i];
      const double mhat = m1[i] / bc1;
      const double vhat = m2[i] / bc2;
      theta[i] -= tc.lr * mhat / (std::sqrt(vhat) + tc.epsilon);
    }
  };
  for (size_t li = 0; li < m.convs.size(); ++li) {
    update(m.convs[li].w, state.m1.conv_w[li], state.m2.conv_w[li], grads.conv_w[li]);
    update(m.convs[li].b, state.m1.conv_b[li], state.m2.conv_b[li], grads.conv_b[li]);
  }
  update(m.head.w, state.m1.head_w, state.m2.head_w, grads.head_w);
  update(m.head.b, state.m1.head_b, state.m2.head_b, grads.head_b);
}

Model replace_head(const Model& m, int n_outputs, uint64_t seed) {
  if (n_outputs < 1) throw ConfigError("replace_head: n_outputs must be >= 1");
  Model out = m;
  out.cfg.n_outputs = n_outputs;
  out.head.out_dim = n_outputs;
  Rng rng(derive_seed(seed, 0x6eadULL));
  init_dense(out.head, rng);
  return out;
}

namespace {

constexpr char kCkptMagic[8] = {'X', 'R', 'P', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& s, uint64_t v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f32(std::string& s, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(s, bits);
}
void put_f64(std::string& s, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(s, bits);
}

struct Reader {
  const std::string& s;
  size_t pos = 0;

  void need(size_t n) const {
    if (pos + n > s.size()) throw DataError("checkpoint: truncated file");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(static_cast<unsigned char>(s[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(static_cast<unsigned char>(s[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  float f32() {
    const uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    const uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
};

void put_tensor(std::string& s, const std::vector<double>& v) {
  put_u64(s, v.size());
  for (double x : v) put_f32(s, static_cast<float>(x));
}

std::vector<double> get_tensor(Reader& r) {
  const uint64_t n = r.u64();
  std::vector<double> v(n);
  for (uint64_t i = 0; i < n; ++i) v[i] = static_cast<double>(r.f32());
  return v;
}

}  // namespace

void save_model(const Model& m, const TrainConfig& tc, const std::filesystem::path& path) {
  std::string s(kCkptMagic, sizeof(kCkptMagic));
  put_u32(s, static_cast<uint32_t>(m.cfg.input_size));
  put_u32(s, static_cast<uint32_t>(m.cfg.blocks.size()));
  for (const ConvSpec& b : m.cfg.blocks) {
    put_u32(s, static_cast<uint32_t>(b.channels));
    put_u32(s, static_cast<uint32_t>(b.kernel));
    put_u32(s, static_cast<uint32_t>(b.stride));
  }
  put_u32(s, static_cast<uint32_t>(m.cfg.n_outputs));
  put_u64(s, m.cfg.seed);
  for (const ConvLayer& L : m.convs) {
    put_tensor(s, L.w);
    put_tensor(s, L.b);
  }
  put_tensor(s, m.head.w);
  put_tensor(s, m.head.b);
  put_f64(s, tc.lr);
  put_f64(s, tc.beta1);
  put_f64(s, tc.beta2);
  put_f64(s, tc.epsilon);
  put_u32(s, static_cast<uint32_t>(tc.batch_size));
  put_u32(s, static_cast<uint32_t>(tc.max_epochs));
  put_u32(s, static_cast<uint32_t>(tc.plateau_patience));
  put_f64(s, tc.lr_factor);
  put_f64(s, tc.lr_min);
  put_f64(s, tc.val_frac);
  put_u64(s, tc.seed);
  write_file_atomic(path, s);
}

Checkpoint load_model(const std::filesystem::path& path) {
  const std::string s = read_text_file(path);
  if (s.size() < sizeof(kCkptMagic) || std::memcmp(s.data(), kCkptMagic, sizeof(kCkptMagic)) != 0)
    throw DataError("checkpoint: bad magic in " + path.string());
  Reader r{s, sizeof(kCkptMagic)};
  Checkpoint ck;
  ck.model.cfg.input_size = static_cast<int>(r.u32());
  const uint32_t n_blocks = r.u32();
  ck.model.cfg.blocks.clear();
  for (uint32_t i = 0; i < n_blocks; ++i) {
    ConvSpec b;
    b.channels = static_cast<int>(r.u32());
    b.kernel = static_cast<int>(r.u32());
    b.stride = static_cast<int>(r.u32());
    ck.model.cfg.blocks.push_back(b);
  }
  ck.model.cfg.n_outputs = static_cast<int>(r.u32());
  ck.model.cfg.seed = r.u64();
  int in_ch = 1;
  for (const ConvSpec& b : ck.model.cfg.blocks) {
    ConvLayer L;
    L.in_ch = in_ch;
    L.out_ch = b.channels;
    L.kernel = b.kernel;
    L.stride = b.stride;
    L.w = get_tensor(r);
    L.b = get_tensor(r);
    if (L.w.size() != size_t(L.out_ch) * L.in_ch * L.kernel * L.kernel ||
        L.b.size() != size_t(L.out_ch))
      throw DataError("checkpoint: tensor shape mismatch in " + path.string());
    ck.model.convs.push_back(std::move(L));
    in_ch = b.channels;
  }
  ck.model.head.in_dim = in_ch;
  ck.model.head.out_dim = ck.model.cfg.n_outputs;
  ck.model.head.w = get_tensor(r);
  ck.model.head.b = get_tensor(r);
  if (ck.model.head.w.size() != size_t(in_ch) * ck.model.cfg.n_outputs ||
      ck.model.head.b.size() != size_t(ck.model.cfg.n_outputs))
    throw DataError("checkpoint: head shape mismatch in " + path.string());
  ck.train.lr = r.f64();
  ck.train.beta1 = r.f64();
  ck.train.beta2 = r.f64();
  ck.train.epsilon = r.f64();
  ck.train.batch_size = static_cast<int>(r.u32());
  ck.train.max_epochs = static_cast<int>(r.u32());
  ck.train.plateau_patience = static_cast<int>(r.u32());
  ck.train.lr_factor = r.f64();
  ck.train.lr_min = r.f64();
  ck.train.val_frac = r.f64();
  ck.train.seed = r.u64();
  return ck;
}

}  // namespace xrp
