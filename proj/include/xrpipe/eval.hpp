#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "xrpipe/labels.hpp"

namespace xrp {

struct Provenance {
  std::string experiment;
  int resample = -1;
  std::string model_id;
};

/// Samples x findings score matrix; row order matches the split's test-id
/// order.
struct PredictionMatrix {
  std::vector<std::string> sample_ids;
  std::vector<std::array<double, kNumFindings>> scores;
  Provenance provenance;

  size_t size() const { return sample_ids.size(); }
};

/// Ordered (false-positive-rate, true-positive-rate) points from (0,0) to
/// (1,1); both coordinates non-decreasing.
struct RocCurve {
  std::vector<std::pair<double, double>> points;
};

/// Thresholds sweep the distinct score values descending; tied scores
/// advance TP and FP jointly (one diagonal segment). Throws
/// SingleClassError when labels are all 0 or all 1; `context` names the
/// finding in the message.
RocCurve roc_curve(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
                   const std::string& context = {});

/// Trapezoidal area; equals the Mann-Whitney U statistic with ties counted
/// one half.
double auc(const RocCurve& curve);

double auc_score(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
                 const std::string& context = {});

/// Product-moment correlation. Throws NumericError on zero variance;
/// callers report the cell as undefined.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> values;  // row-major n x n, NaN = undefined cell

  double at(size_t i, size_t j) const { return values[i * names.size() + j]; }
};

/// Each predictor's score matrix is flattened row-major to one vector and
/// correlated pairwise. Unit diagonal, symmetric. Values are kept in
/// [-1, 1] here; the x100 scale appears only in emitted files.
CorrelationMatrix correlation_matrix(const std::vector<PredictionMatrix>& preds);

/// Element-wise mean. Each cell is summed over members in value-sorted
/// order, so the result is invariant (bit-level) under member reordering.
PredictionMatrix ensemble_average(const std::vector<PredictionMatrix>& preds);

struct AucCell {
  double mean = 0.0;
  std::optional<double> sd;  // absent when < 2 valid resamples
  int n_valid = 0;
};

/// Per-finding mean and sample SD (n-1) over resamples, plus the AVG row
/// over the seven findings excluding pneumothorax. Undefined per-resample
/// AUCs (single-class test split) are excluded from the mean; n_valid
/// counts the rest.
struct AucReport {
  std::array<AucCell, kNumFindings> findings;
  AucCell average;
};

using AucTable = std::array<std::vector<std::optional<double>>, kNumFindings>;

AucReport aggregate(const AucTable& per_resample_aucs);

}  // namespace xrp
