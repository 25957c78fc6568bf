#include "xrpipe/splits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "xrpipe/errors.hpp"
#include "xrpipe/rng.hpp"
#include "xrpipe/util.hpp"

namespace xrp {

SplitPlan make_splits(const std::vector<std::string>& ids, int n_resamples, double train_frac,
                      uint64_t seed) {
  if (ids.size() < 2) throw DataError("make_splits: need at least 2 ids");
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw ConfigError("make_splits: train_frac must lie in (0, 1)");
  if (n_resamples < 1) throw ConfigError("make_splits: n_resamples must be >= 1");

  const auto n = static_cast<long long>(ids.size());
  long long n_train = std::llround(train_frac * static_cast<double>(n));
  n_train = std::clamp(n_train, 1LL, n - 1);

  SplitPlan plan;
  plan.seed = seed;
  plan.train_frac = train_frac;
  plan.n_resamples = n_resamples;
  plan.resamples.reserve(n_resamples);
  for (int r = 0; r < n_resamples; ++r) {
    std::vector<std::string> shuffled = ids;
    Rng rng(derive_seed(seed, static_cast<uint64_t>(r)));
    rng.shuffle(shuffled);
    SplitAssignment a;
    a.train.assign(shuffled.begin(), shuffled.begin() + n_train);
    a.test.assign(shuffled.begin() + n_train, shuffled.end());
    plan.resamples.push_back(std::move(a));
  }
  return plan;
}

void save_split_plan(const SplitPlan& plan, const std::filesystem::path& path) {
  std::string out = "xrpipe-splitplan v1\n";
  out += "seed " + std::to_string(plan.seed) + "\n";
  out += "train_frac " + fmt_general(plan.train_frac, 17) + "\n";
  out += "n_resamples " + std::to_string(plan.n_resamples) + "\n";
  for (int r = 0; r < plan.n_resamples; ++r) {
    const SplitAssignment& a = plan.resamples[r];
    out += "resample " + std::to_string(r) + "\n";
    out += "train " + join(a.train, " ") + "\n";
    out += "test " + join(a.test, " ") + "\n";
  }
  write_file_atomic(path, out);
}

SplitPlan load_split_plan(const std::filesystem::path& path) {
  const std::vector<std::string> lines = split(read_text_file(path), '\n');
  if (lines.empty() || lines[0] != "xrpipe-splitplan v1")
    throw DataError("split plan: unknown format/version in " + path.string());
  SplitPlan plan;
  size_t i = 1;
  auto field = [&](const char* key) -> std::string {
    if (i >= lines.size()) throw DataError("split plan: truncated file " + path.string());
    const auto parts = split(lines[i], ' ');
    if (parts.size() < 2 || parts[0] != key)
      throw DataError("split plan: expected '" + std::string(key) + "' on line " +
                      std::to_string(i + 1));
    ++i;
    return parts[1];
  };
  plan.seed = std::stoull(field("seed"));
  plan.train_frac = std::stod(field("train_frac"));
  plan.n_resamples = std::stoi(field("n_resamples"));
  for (int r = 0; r < plan.n_resamples; ++r) {
    field("resample");
    SplitAssignment a;
    for (const char* key : {"train", "test"}) {
      if (i >= lines.size()) throw DataError("split plan: truncated file " + path.string());
      auto parts = split(lines[i], ' ');
      if (parts.empty() || parts[0] != key)
        throw DataError("split plan: expected id list '" + std::string(key) + "'");
      ++i;
      std::vector<std::string> ids(parts.begin() + 1, parts.end());
      if (key[0] == 't' && key[1] == 'r')
        a.train = std::move(ids);
      else
        a.test = std::move(ids);
    }
    plan.resamples.push_back(std::move(a));
  }
  return plan;
}

}  // namespace xrp
