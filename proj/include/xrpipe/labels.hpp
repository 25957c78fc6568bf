#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xrp {

/// The eight findings, in the fixed order that defines column order in
/// every table, matrix, and report.
enum class Finding : int {
  pleural_effusion = 0,
  infiltrate,
  congestion,
  atelectasis,
  pneumothorax,
  cardiomegaly,
  mass,
  foreign_object,
};

inline constexpr int kNumFindings = 8;

inline constexpr std::array<const char*, kNumFindings> kFindingNames = {
    "pleural_effusion", "infiltrate",   "congestion", "atelectasis",
    "pneumothorax",     "cardiomegaly", "mass",       "foreign_object"};

const char* finding_name(Finding f);
std::optional<Finding> finding_from_name(std::string_view name);

using LabelRow = std::array<uint8_t, kNumFindings>;

/// Per-sample binary findings. Row order follows sample_ids; ids are unique.
struct LabelTable {
  std::vector<std::string> sample_ids;
  std::vector<LabelRow> rows;

  size_t size() const { return sample_ids.size(); }
  int index_of(std::string_view id) const;  // -1 if absent
};

/// Strict CSV reader; header and cells must match the documented schema
/// exactly (cells are '0' or '1', LF line endings, unique ids).
LabelTable load_labels(const std::filesystem::path& path);

void save_labels(const LabelTable& table, const std::filesystem::path& path);

/// Fraction of positive samples for the finding.
double prevalence(const LabelTable& table, Finding f);

/// Synthetic 3125-sample table whose per-finding positive counts equal the
/// Indiana dataset marginals; co-occurrence is independent given the
/// marginals. data/fixtures/table1_labels.csv is this table for seed 7.
LabelTable make_table1_fixture(uint64_t seed);

inline constexpr int kTable1Samples = 3125;
inline constexpr std::array<int, kNumFindings> kTable1Positives = {147, 152,  170, 212,
                                                                   11,  529, 447, 1121};

}  // namespace xrp
