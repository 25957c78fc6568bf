#pragma once

#include <stdexcept>

namespace xrp {

// CLI exit codes: 1 = configuration, 2 = data, 3 = numerical/internal.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lung segmentation produced an empty mask. The pipeline catches this and
// falls back to the uncropped image.
struct SegmentationError : DataError {
  using DataError::DataError;
};

// ROC/AUC is undefined when only one class is present in the labels.
struct SingleClassError : DataError {
  using DataError::DataError;
};

}  // namespace xrp
