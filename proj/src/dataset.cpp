#include "scatterkit/dataset.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "scatterkit/errors.hpp"

namespace scatterkit {
namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

std::string fnv1a_hex(const std::vector<unsigned char>& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << hash;
  return os.str();
}

std::uint32_t read_be_u32(const std::vector<unsigned char>& bytes, std::size_t offset,
                          const std::string& path) {
  if (offset + 4 > bytes.size()) throw IoError("truncated IDX header in " + path);
  return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
         (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[offset + 3]);
}

void check_magic(const std::vector<unsigned char>& bytes, std::uint32_t expected,
                 const std::string& path) {
  const std::uint32_t magic = read_be_u32(bytes, 0, path);
  if (magic != expected) {
    std::ostringstream msg;
    msg << "bad IDX magic in " << path << ": bytes";
    for (int i = 0; i < 4; ++i)
      msg << " 0x" << std::hex << static_cast<unsigned>(bytes[i]);
    msg << " (expected 0x" << std::hex << expected << ")";
    throw FormatError(msg.str());
  }
}

// grids are padded up to a power of two, with 4 as the floor so even tiny
// fixtures leave room for dyadic subsampling
std::size_t padded_extent(std::size_t n) {
  std::size_t p = 4;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  const std::vector<unsigned char> image_bytes = read_all(images_path);
  const std::vector<unsigned char> label_bytes = read_all(labels_path);

  check_magic(image_bytes, kImagesMagic, images_path);
  check_magic(label_bytes, kLabelsMagic, labels_path);

  const std::uint32_t image_count = read_be_u32(image_bytes, 4, images_path);
  const std::uint32_t rows = read_be_u32(image_bytes, 8, images_path);
  const std::uint32_t cols = read_be_u32(image_bytes, 12, images_path);
  const std::uint32_t label_count = read_be_u32(label_bytes, 4, labels_path);

  if (image_count != label_count) {
    std::ostringstream msg;
    msg << "IDX count mismatch: " << images_path << " declares " << image_count
        << " images but " << labels_path << " declares " << label_count << " labels";
    throw FormatError(msg.str());
  }
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  if (image_bytes.size() < 16 + static_cast<std::size_t>(image_count) * pixels)
    throw IoError("truncated IDX image payload in " + images_path);
  if (label_bytes.size() < 8 + label_count)
    throw IoError("truncated IDX label payload in " + labels_path);

  const std::size_t padded_h = padded_extent(rows);
  const std::size_t padded_w = padded_extent(cols);
  const std::size_t off_y = (padded_h - rows) / 2;
  const std::size_t off_x = (padded_w - cols) / 2;

  LabeledDataset dataset;
  dataset.images_digest = fnv1a_hex(image_bytes);
  dataset.labels_digest = fnv1a_hex(label_bytes);
  dataset.images.reserve(image_count);
  dataset.labels.reserve(image_count);

  int max_label = -1;
  for (std::uint32_t i = 0; i < image_count; ++i) {
    std::vector<double> grid(padded_h * padded_w, 0.0);
    const std::size_t base = 16 + static_cast<std::size_t>(i) * pixels;
    for (std::uint32_t y = 0; y < rows; ++y)
      for (std::uint32_t x = 0; x < cols; ++x)
        grid[(y + off_y) * padded_w + (x + off_x)] =
            static_cast<double>(image_bytes[base + y * cols + x]) / 255.0;
    dataset.images.push_back(Signal::real_2d(grid, padded_h, padded_w));

    const int label = static_cast<int>(label_bytes[8 + i]);
    dataset.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  dataset.class_count = max_label + 1;
  return dataset;
}

LabeledDataset subset(const LabeledDataset& dataset, const std::vector<std::size_t>& indices) {
  LabeledDataset out;
  out.class_count = dataset.class_count;
  out.images_digest = dataset.images_digest;
  out.labels_digest = dataset.labels_digest;
  for (std::size_t i : indices) {
    if (i >= dataset.size()) throw InvalidInputError("subset: index out of range");
    out.images.push_back(dataset.images[i]);
    out.labels.push_back(dataset.labels[i]);
  }
  return out;
}

}  // namespace scatterkit
