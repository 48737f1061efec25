#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "copyqnn/image.hpp"
#include "copyqnn/synth.hpp"

namespace copyqnn::data {

/// Two source classes remapped to {0, 1}, split into disjoint pools:
/// victim train, evaluation test, and the attacker's unlabeled query pool.
/// Ground-truth labels ride along for evaluation only.
struct BinaryTask {
    std::string name; // e.g. m01, f23
    int class_a = 0;
    int class_b = 1;
    std::vector<ImageSample> train;
    std::vector<ImageSample> test;
    std::vector<ImageSample> query_pool;
};

/// m01, m23, ..., f89: dataset kind plus the class pair.
struct TaskSpec {
    SynthKind kind;
    int class_a;
    int class_b;
};

TaskSpec parse_task_name(const std::string &name);

/// Where images come from: synthetic corpus (default) or IDX files in
/// `idx_dir` named like the MNIST distribution. For IDX sources, MNIST and
/// Fashion-MNIST live in subdirectories "mnist" and "fashion".
struct DataSource {
    std::optional<std::filesystem::path> idx_dir;
    std::uint64_t synth_seed = 0;
    int synth_train_pool = 4000; // per dataset, before class filtering
    int synth_test_pool = 1200;
};

/// Builds the task with `train_size`/`test_size` per split and
/// `query_pool_size` extra unlabeled samples, all class-balanced as far as
/// the source allows. Train and query samples come from the source's train
/// pool (disjoint), test from the test pool.
BinaryTask build_task(const DataSource &source, const std::string &task_name,
                      int train_size, int test_size, int query_pool_size);

/// Downsampled flattened inputs for a whole split. A positive
/// anti_alias_sigma blurs before downsampling; needed at strong reduction
/// factors where corner-aligned bilinear degenerates to point sampling.
std::vector<std::vector<double>> resized_inputs(const std::vector<ImageSample> &images,
                                                int side, double anti_alias_sigma = 0.0);

/// Default anti-alias strength for the 4x4 victim inputs of each dataset.
double victim_anti_alias_sigma(SynthKind kind);
std::vector<int> labels_of(const std::vector<ImageSample> &images);

} // namespace copyqnn::data
