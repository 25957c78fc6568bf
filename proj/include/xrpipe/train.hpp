#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "xrpipe/augment.hpp"
#include "xrpipe/model.hpp"
#include "xrpipe/splits.hpp"

namespace xrp {

/// Images and label rows aligned by index; the id list is the lookup key.
struct SampleSet {
  std::vector<std::string> ids;
  std::vector<Image> images;
  LabelMatrix labels;

  int index_of(const std::string& id) const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  Model model;  // parameters of the best-validation epoch
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_val_loss = 0.0;
};

/// Augmented mini-batch training with ADAM and plateau LR halving.
///
/// A val_frac share of the training ids is carved off deterministically
/// from tc.seed as the validation set. Per epoch: shuffled batches
/// (last partial batch kept), per-sample augmentation with an rng split by
/// (epoch, sample), forward/backward/adam_step. Validation loss is computed
/// without augmentation (plain resize to train_size); after
/// plateau_patience epochs without improvement the learning rate halves
/// (floored at lr_min). The returned model is the best-validation snapshot.
TrainResult train(const SampleSet& data, const SplitAssignment& split, const TrainConfig& tc,
                  const ModelConfig& mc, const AugConfig& ac);

/// Arithmetic mean of forward over the five test_transform crops.
std::vector<double> predict_five_crop(const Model& m, const Image& img, const AugConfig& ac);

/// CSV: epoch,train_loss,val_loss,lr
void write_training_log(const std::vector<EpochLog>& log, const std::filesystem::path& path);

}  // namespace xrp
