#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "copyqnn/image.hpp"
#include "copyqnn/noise_profile.hpp"
#include "copyqnn/tasks.hpp"
#include "copyqnn/trainers.hpp"

namespace copyqnn::harness {

struct DataConfig {
    std::optional<std::filesystem::path> idx_dir; // synthetic corpus when absent
    std::uint64_t synth_seed = 1;
    int victim_train = 3000;
    int victim_test = 1000;
    int source_size = 1024; // unlabeled pretraining images
    int query_pool = 40;
};

enum class ScheduleKind { Desk, Brisbane, Zero, File };

struct NoiseConfig {
    ScheduleKind kind = ScheduleKind::Desk;
    std::optional<std::filesystem::path> path; // for ScheduleKind::File
    double jitter_sigma = 0.05;
};

struct QueryConfig {
    int samples = 40;
    int rounds = 5;
    long shots = 1024;
    double phase = 0.0;
};

struct CleanConfig {
    bool use_mixup = true;
    double mixup_alpha = 0.2;
};

struct PretrainConfig {
    int qubits = 8;
    int layers = 4;
    train::BarlowConfig barlow{};
    data::AugmentConfig augment{.method = data::AugmentMethod::Jitter,
                                .gaussian_blur = true};
};

struct ClassifierConfig {
    int qubits = 4;
    int layers = 4;
    train::ClassifierTrainConfig train{};
};

struct BaselineTrainConfig {
    train::BaselineConfig base{};
    int committee = 5;
};

struct ExperimentConfig {
    std::string task = "m23";
    std::optional<std::string> source_task; // auto-paired when absent
    std::filesystem::path out_dir = "out";
    std::vector<std::uint64_t> seeds = {11, 22, 33};
    std::vector<std::string> schemes = {"base", "qleak", "copyqnn"};
    std::vector<double> rr_grid = {0.6};
    std::vector<int> rounds_grid = {2, 4, 10, 20, 40};
    int fluct_hours = 5;
    int jobs = 1;
    bool desk_scale = false;

    DataConfig data{};
    train::VictimTrainConfig victim{};
    NoiseConfig noise{};
    QueryConfig query{};
    CleanConfig clean{};
    PretrainConfig pretrain{};
    ClassifierConfig classifier{};
    BaselineTrainConfig baseline{};

    /// Victim-test split sizes etc. shrunk for seconds-scale runs.
    void apply_desk_scale();
    /// The contrastive source task: the complementary pair in the same
    /// dataset family unless configured.
    std::string resolved_source_task() const;
    data::DataSource data_source() const;
    noise::NoiseSchedule schedule(std::uint64_t run_seed) const;

    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &cfg);
ExperimentConfig load_config(const std::filesystem::path &path);

} // namespace copyqnn::harness
