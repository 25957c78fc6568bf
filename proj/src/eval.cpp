#include "xrpipe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xrpipe/errors.hpp"
#include "xrpipe/util.hpp"

namespace xrp {

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
                   const std::string& context) {
  if (scores.size() != labels.size() || scores.empty())
    throw DataError("roc_curve: scores/labels shape mismatch");
  size_t pos = 0;
  for (uint8_t y : labels) pos += (y != 0);
  const size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw SingleClassError("roc_curve: single-class labels" +
                           (context.empty() ? std::string{} : " for " + context));

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  size_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    // Advance over the whole tie group before emitting a point.
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]])
        ++tp;
      else
        ++fp;
      ++i;
    }
    curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                              static_cast<double>(tp) / static_cast<double>(pos));
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const auto& [x0, y0] = curve.points[i - 1];
    const auto& [x1, y1] = curve.points[i];
    area += (x1 - x0) * (y0 + y1) * 0.5;
  }
  return area;
}

double auc_score(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
                 const std::string& context) {
  return auc(roc_curve(scores, labels, context));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DataError("pearson: need two equal-length vectors of size >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericError("pearson: zero variance input");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

void check_aligned(const std::vector<PredictionMatrix>& preds, const char* what) {
  if (preds.size() < 2) throw DataError(std::string(what) + ": need at least 2 members");
  for (size_t i = 1; i < preds.size(); ++i) {
    if (preds[i].sample_ids != preds[0].sample_ids)
      throw DataError(std::string(what) + ": sample id mismatch between members");
  }
}

std::vector<double> flatten(const PredictionMatrix& p) {
  std::vector<double> v;
  v.reserve(p.size() * kNumFindings);
  for (const auto& row : p.scores)
    for (double s : row) v.push_back(s);
  return v;
}

}  // namespace

CorrelationMatrix correlation_matrix(const std::vector<PredictionMatrix>& preds) {
  check_aligned(preds, "correlation_matrix");
  const size_t n = preds.size();
  std::vector<std::vector<double>> flat;
  flat.reserve(n);
  for (const auto& p : preds) flat.push_back(flatten(p));

  CorrelationMatrix out;
  out.names.reserve(n);
  for (const auto& p : preds) out.names.push_back(p.provenance.model_id);
  out.values.assign(n * n, 1.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double r;
      try {
        r = pearson(flat[i], flat[j]);
      } catch (const NumericError&) {
        r = std::numeric_limits<double>::quiet_NaN();
      }
      out.values[i * n + j] = r;
      out.values[j * n + i] = r;
    }
  }
  return out;
}

PredictionMatrix ensemble_average(const std::vector<PredictionMatrix>& preds) {
  check_aligned(preds, "ensemble_average");
  PredictionMatrix out;
  out.sample_ids = preds[0].sample_ids;
  out.scores.assign(preds[0].scores.size(), {});
  std::vector<double> cell(preds.size());
  for (size_t i = 0; i < out.scores.size(); ++i) {
    for (int f = 0; f < kNumFindings; ++f) {
      for (size_t k = 0; k < preds.size(); ++k) cell[k] = preds[k].scores[i][f];
      std::sort(cell.begin(), cell.end());
      double acc = 0.0;
      for (double v : cell) acc += v;
      out.scores[i][f] = acc / static_cast<double>(cell.size());
    }
  }
  std::vector<std::string> members;
  members.reserve(preds.size());
  for (const auto& p : preds) members.push_back(p.provenance.model_id);
  out.provenance.model_id = "avg(" + join(members, "+") + ")";
  out.provenance.resample = preds[0].provenance.resample;
  return out;
}

AucReport aggregate(const AucTable& per_resample_aucs) {
  AucReport report;
  const size_t n_resamples = per_resample_aucs[0].size();
  for (int f = 0; f < kNumFindings; ++f) {
    if (per_resample_aucs[f].size() != n_resamples)
      throw DataError("aggregate: ragged AUC table");
    std::vector<double> vals;
    for (const auto& v : per_resample_aucs[f])
      if (v) vals.push_back(*v);
    AucCell& cell = report.findings[f];
    cell.n_valid = static_cast<int>(vals.size());
    if (vals.empty()) continue;
    cell.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / double(vals.size());
    if (vals.size() >= 2) {
      double ss = 0.0;
      for (double v : vals) ss += (v - cell.mean) * (v - cell.mean);
      cell.sd = std::sqrt(ss / double(vals.size() - 1));
    }
  }

  // AVG row: per-resample mean over the seven findings excluding
  // pneumothorax, then mean +- SD over resamples.
  std::vector<double> per_resample_avg;
  for (size_t r = 0; r < n_resamples; ++r) {
    double acc = 0.0;
    int n = 0;
    for (int f = 0; f < kNumFindings; ++f) {
      if (f == static_cast<int>(Finding::pneumothorax)) continue;
      if (per_resample_aucs[f][r]) {
        acc += *per_resample_aucs[f][r];
        ++n;
      }
    }
    if (n > 0) per_resample_avg.push_back(acc / n);
  }
  report.average.n_valid = static_cast<int>(per_resample_avg.size());
  if (!per_resample_avg.empty()) {
    report.average.mean = std::accumulate(per_resample_avg.begin(), per_resample_avg.end(), 0.0) /
                          double(per_resample_avg.size());
    if (per_resample_avg.size() >= 2) {
      double ss = 0.0;
      for (double v : per_resample_avg) ss += (v - report.average.mean) * (v - report.average.mean);
      report.average.sd = std::sqrt(ss / double(per_resample_avg.size() - 1));
    }
  }
  return report;
}

}  // namespace xrp
