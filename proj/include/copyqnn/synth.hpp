#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "copyqnn/image.hpp"

namespace copyqnn::data {

/// Procedurally drawn 28x28 grayscale corpora in the MNIST layout: ten
/// digit-like classes ("mnist") and ten garment-silhouette classes
/// ("fashion"). Every sample gets its own jittered pose (shift, scale,
/// rotation, stroke width) plus pixel noise, so class pairs are separable
/// but not trivially so. Used when no real IDX files are supplied.
enum class SynthKind { Digits, Fashion };

ImageSample synth_sample(SynthKind kind, int class_id, std::uint64_t seed);

/// `count` samples cycling through the ten classes.
std::vector<ImageSample> synth_corpus(SynthKind kind, int count, std::uint64_t seed);

/// Writes train/test IDX file quadruples mirroring the MNIST layout
/// (train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-...).
void write_synth_idx(SynthKind kind, int train_count, int test_count, std::uint64_t seed,
                     const std::filesystem::path &dir);

} // namespace copyqnn::data
