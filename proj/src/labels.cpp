#include "xrpipe/labels.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "xrpipe/errors.hpp"
#include "xrpipe/rng.hpp"
#include "xrpipe/util.hpp"

namespace xrp {

namespace {

std::string expected_header() {
  std::string h = "id";
  for (const char* name : kFindingNames) {
    h += ',';
    h += name;
  }
  return h;
}

}  // namespace

const char* finding_name(Finding f) { return kFindingNames[static_cast<int>(f)]; }

std::optional<Finding> finding_from_name(std::string_view name) {
  for (int i = 0; i < kNumFindings; ++i)
    if (name == kFindingNames[i]) return static_cast<Finding>(i);
  return std::nullopt;
}

int LabelTable::index_of(std::string_view id) const {
  for (size_t i = 0; i < sample_ids.size(); ++i)
    if (sample_ids[i] == id) return static_cast<int>(i);
  return -1;
}

LabelTable load_labels(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (text.find('\r') != std::string::npos)
    throw DataError("labels: CR line endings found, the schema requires LF: " + path.string());
  std::vector<std::string> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError("labels: empty file: " + path.string());
  if (lines[0] != expected_header())
    throw DataError("labels: bad header, expected '" + expected_header() + "' in " + path.string());

  LabelTable table;
  std::unordered_set<std::string> seen;
  for (size_t li = 1; li < lines.size(); ++li) {
    const std::vector<std::string> cells = split(lines[li], ',');
    if (cells.size() != size_t(kNumFindings) + 1)
      throw DataError("labels: line " + std::to_string(li + 1) + " has " +
                      std::to_string(cells.size()) + " columns, expected " +
                      std::to_string(kNumFindings + 1));
    const std::string& id = cells[0];
    if (id.empty() || id.find_first_of(" \t") != std::string::npos)
      throw DataError("labels: invalid sample id '" + id + "' on line " + std::to_string(li + 1));
    if (!seen.insert(id).second) throw DataError("labels: duplicate sample id '" + id + "'");
    LabelRow row{};
    for (int f = 0; f < kNumFindings; ++f) {
      const std::string& cell = cells[f + 1];
      if (cell != "0" && cell != "1")
        throw DataError("labels: non-binary cell '" + cell + "' for id '" + id + "' column " +
                        kFindingNames[f]);
      row[f] = cell == "1" ? 1 : 0;
    }
    table.sample_ids.push_back(id);
    table.rows.push_back(row);
  }
  return table;
}

void save_labels(const LabelTable& table, const std::filesystem::path& path) {
  std::string out = expected_header() + "\n";
  for (size_t i = 0; i < table.size(); ++i) {
    out += table.sample_ids[i];
    for (int f = 0; f < kNumFindings; ++f) {
      out += ',';
      out += table.rows[i][f] ? '1' : '0';
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

double prevalence(const LabelTable& table, Finding f) {
  if (table.size() == 0) throw DataError("prevalence: empty label table");
  const int col = static_cast<int>(f);
  size_t positives = 0;
  for (const LabelRow& row : table.rows) positives += row[col];
  return static_cast<double>(positives) / static_cast<double>(table.size());
}

LabelTable make_table1_fixture(uint64_t seed) {
  LabelTable table;
  table.sample_ids.reserve(kTable1Samples);
  table.rows.assign(kTable1Samples, LabelRow{});
  for (int i = 0; i < kTable1Samples; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "img%04d", i + 1);
    table.sample_ids.emplace_back(buf);
  }
  // Exactly the published positive count per finding, positions drawn
  // independently per column.
  for (int f = 0; f < kNumFindings; ++f) {
    std::vector<int> order(kTable1Samples);
    for (int i = 0; i < kTable1Samples; ++i) order[i] = i;
    Rng rng(derive_seed(seed, static_cast<uint64_t>(f)));
    rng.shuffle(order);
    for (int i = 0; i < kTable1Positives[f]; ++i) table.rows[order[i]][f] = 1;
  }
  return table;
}

}  // namespace xrp
