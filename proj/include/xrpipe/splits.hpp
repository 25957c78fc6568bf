#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace xrp {

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Deterministic repeated 70/30 resampling plan. Fully reproducible from
/// (ids, seed): resample r shuffles with an mt19937_64 seeded by
/// derive_seed(seed, r).
struct SplitPlan {
  uint64_t seed = 0;
  double train_frac = 0.7;
  int n_resamples = 0;
  std::vector<SplitAssignment> resamples;
};

SplitPlan make_splits(const std::vector<std::string>& ids, int n_resamples = 5,
                      double train_frac = 0.7, uint64_t seed = 0);

void save_split_plan(const SplitPlan& plan, const std::filesystem::path& path);
SplitPlan load_split_plan(const std::filesystem::path& path);

}  // namespace xrp
