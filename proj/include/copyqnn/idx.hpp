#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "copyqnn/image.hpp"

namespace copyqnn::data {

/// Parses an IDX image/label file pair (the MNIST container format).
/// Pixels are scaled to [0, 1] by /255. Plain or gzip-compressed files are
/// both accepted; compression is detected from the leading bytes.
std::vector<ImageSample> load_idx(const std::filesystem::path &images_path,
                                  const std::filesystem::path &labels_path);

/// Writers, for the synthetic corpus and for fixtures.
void write_idx_images(const std::vector<ImageSample> &images,
                      const std::filesystem::path &path);
void write_idx_labels(const std::vector<ImageSample> &images,
                      const std::filesystem::path &path);

} // namespace copyqnn::data
