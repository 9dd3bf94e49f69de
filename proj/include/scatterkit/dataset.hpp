#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scatterkit/signal.hpp"

namespace scatterkit {

/// Labeled image set ingested from IDX files. Pixels are scaled to [0, 1] and
/// each image is zero-padded (centered) up to the next power of two per
/// dimension, so a 28x28 digit arrives as a 32x32 grid.
struct LabeledDataset {
  std::vector<Signal> images;
  std::vector<int> labels;
  int class_count = 0;
  std::string images_digest;  // FNV-1a over the source bytes
  std::string labels_digest;

  std::size_t size() const { return images.size(); }
};

/// Reads an IDX image tensor (magic 0x00000803) and label vector (magic
/// 0x00000801), both big-endian. Bad magic raises FormatError with the
/// offending bytes; a count mismatch between the two files raises
/// FormatError; truncation raises IoError.
LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path);

/// Keeps the selected sample indices, in the given order.
LabeledDataset subset(const LabeledDataset& dataset, const std::vector<std::size_t>& indices);

}  // namespace scatterkit
