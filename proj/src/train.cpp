#include "xrpipe/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "xrpipe/errors.hpp"
#include "xrpipe/util.hpp"

namespace xrp {

namespace {

// Tags for deriving independent rng streams from tc.seed.
constexpr uint64_t kValCarveTag = 0x11;
constexpr uint64_t kEpochShuffleTag = 0x22;
constexpr uint64_t kAugmentTag = 0x33;

std::vector<int> resolve_ids(const SampleSet& data, const std::vector<std::string>& ids) {
  std::unordered_map<std::string, int> index;
  index.reserve(data.ids.size());
  for (size_t i = 0; i < data.ids.size(); ++i) index.emplace(data.ids[i], static_cast<int>(i));
  std::vector<int> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) throw DataError("train: split id not in sample set: " + id);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

int SampleSet::index_of(const std::string& id) const {
  for (size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  return -1;
}

TrainResult train(const SampleSet& data, const SplitAssignment& split, const TrainConfig& tc,
                  const ModelConfig& mc, const AugConfig& ac) {
  tc.validate();
  ac.validate();
  if (split.train.empty()) throw DataError("train: empty train set");

  std::vector<int> pool = resolve_ids(data, split.train);

  // Deterministic validation carve-out from the training ids.
  {
    Rng rng(derive_seed(tc.seed, kValCarveTag));
    rng.shuffle(pool);
  }
  const auto n_val = std::min<size_t>(
      pool.size() - 1, static_cast<size_t>(std::llround(tc.val_frac * double(pool.size()))));
  std::vector<int> val_idx(pool.end() - n_val, pool.end());
  std::vector<int> train_idx(pool.begin(), pool.end() - n_val);

  // Augmentation streams are split per (epoch, position in the unshuffled
  // train list), so batch order never affects the draws.
  const Rng aug_root(derive_seed(tc.seed, kAugmentTag));

  std::vector<Image> val_images;
  LabelMatrix val_labels;
  for (int idx : val_idx) {
    val_images.push_back(resize_bilinear(data.images[idx], ac.train_size, ac.train_size));
    val_labels.push_back(data.labels[idx]);
  }

  Model model = init_model(mc);
  AdamState adam = AdamState::zeros_like(model);
  TrainConfig tc_now = tc;

  TrainResult result;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int epoch = 0; epoch < tc.max_epochs; ++epoch) {
    std::vector<int> order(train_idx.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    Rng shuffle_rng(derive_seed(tc.seed, kEpochShuffleTag, static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size(); start += tc.batch_size) {
      const size_t end = std::min(order.size(), start + tc.batch_size);
      std::vector<Image> batch;
      LabelMatrix batch_labels;
      batch.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        const int pos = order[i];
        Rng rng = aug_root.child(static_cast<uint64_t>(epoch), static_cast<uint64_t>(pos));
        batch.push_back(augment(data.images[train_idx[pos]], rng, ac));
        batch_labels.push_back(data.labels[train_idx[pos]]);
      }
      Gradients grads;
      const double loss = backward(model, batch, batch_labels, grads);
      if (!std::isfinite(loss))
        throw NumericError("train: non-finite loss in epoch " + std::to_string(epoch));
      adam_step(model, adam, grads, tc_now);
      epoch_loss += loss * static_cast<double>(batch.size());
      seen += batch.size();
    }
    epoch_loss /= static_cast<double>(seen);

    double val_loss = epoch_loss;
    if (!val_images.empty()) val_loss = bce_loss(forward(model, val_images), val_labels);

    result.log.push_back(EpochLog{epoch, epoch_loss, val_loss, tc_now.lr});

    if (val_loss < result.best_val_loss) {
      result.best_val_loss = val_loss;
      result.best_epoch = epoch;
      result.model = model;
      stall = 0;
    } else {
      ++stall;
      if (stall >= tc.plateau_patience) {
        tc_now.lr = std::max(tc.lr_min, tc_now.lr * tc.lr_factor);
        stall = 0;
      }
    }
  }
  return result;
}

std::vector<double> predict_five_crop(const Model& m, const Image& img, const AugConfig& ac) {
  const std::array<Image, 5> crops = test_transform(img, ac);
  std::vector<double> mean(m.head.out_dim, 0.0);
  for (const Image& c : crops) {
    const std::vector<double> p = forward_one(m, c);
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += p[i];
  }
  for (double& v : mean) v /= 5.0;
  return mean;
}

void write_training_log(const std::vector<EpochLog>& log, const std::filesystem::path& path) {
  std::string out = "epoch,train_loss,val_loss,lr\n";
  for (const EpochLog& e : log) {
    out += std::to_string(e.epoch) + "," + fmt_general(e.train_loss, 12) + "," +
           fmt_general(e.val_loss, 12) + "," + fmt_general(e.lr, 12) + "\n";
  }
  write_file_atomic(path, out);
}

}  // namespace xrp
