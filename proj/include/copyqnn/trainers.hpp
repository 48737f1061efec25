#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "copyqnn/barlow.hpp"
#include "copyqnn/circuit.hpp"
#include "copyqnn/cleanse.hpp"
#include "copyqnn/image.hpp"
#include "copyqnn/qnnaas.hpp"
#include "copyqnn/tasks.hpp"

namespace copyqnn::train {

struct TrainLogEntry {
    int epoch = 0;
    double loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
};
using TrainLog = std::vector<TrainLogEntry>;

void write_train_log(const TrainLog &log, const std::filesystem::path &path);

/// Targets are probability vectors; one-hot for hard labels.
struct LabeledVectors {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
};

std::vector<double> one_hot(int label, int num_classes);

struct OptimConfig {
    int epochs = 100;
    int batch_size = 32;
    double lr = 5e-3;
    double weight_decay = 1e-4;
    double init_scale = 0.3;  // uniform(-s, s) initial angles
    double logit_scale = 4.0; // Z readouts are bounded in [-1,1]; the scale
                              // lets cross-entropy reach confident minima
};

/// Cross-entropy training of a circuit whose logits are the Z readouts of
/// class_qubits. Shuffles per epoch, averages gradients per batch, one
/// Adam step per batch. Bit-reproducible from (seed, config, data).
sim::ParamCircuit train_supervised(sim::ParamCircuit circ,
                                   const std::vector<int> &class_qubits,
                                   const LabeledVectors &train_data,
                                   const LabeledVectors *eval_data, const OptimConfig &cfg,
                                   std::uint64_t seed, TrainLog *log = nullptr);

/// Softmax over the class-qubit Z readouts.
std::vector<double> class_probabilities(const sim::ParamCircuit &circ,
                                        const std::vector<int> &class_qubits,
                                        std::span<const double> input);
int predict(const sim::ParamCircuit &circ, const std::vector<int> &class_qubits,
            std::span<const double> input);
double accuracy(const std::function<int(std::span<const double>)> &predictor,
                const std::vector<std::vector<double>> &inputs,
                const std::vector<int> &labels);

struct VictimTrainConfig {
    int num_qubits = 4;
    int num_layers = 2;
    int input_side = 4;            // victim consumes input_side^2 amplitudes
    double anti_alias_sigma = 2.0; // pre-downsampling blur for 28 -> 4
    OptimConfig optim{.epochs = 30, .batch_size = 32, .lr = 5e-3, .weight_decay = 1e-4};
};

/// Noiseless victim training with hard-label negative log likelihood.
service::VictimModel train_victim(const data::BinaryTask &task,
                                  const VictimTrainConfig &cfg, std::uint64_t seed,
                                  TrainLog *log = nullptr);

struct BarlowConfig {
    double lambda = 5e-3;
    int batch_size = 256;
    double lr = 5e-3;
    double weight_decay = 1e-4;
    int epochs = 100;
    double std_eps = 1e-4;
    double init_scale = 0.3;
};

struct PretrainResult {
    sim::ParamCircuit qenc;
    std::vector<double> loss_history; // mean batch loss per epoch
};

/// Contrastive pretraining of the encoder on an unlabeled source set
/// (images already at the encoder resolution): augmented twin views,
/// Barlow Twins objective, gradients through the circuit.
PretrainResult pretrain_qenc(const std::vector<data::ImageSample> &source_images,
                             const BarlowConfig &cfg, const data::AugmentConfig &aug,
                             int num_qubits, int num_layers, std::uint64_t seed);

/// Frozen pretrained encoder + trainable classifier head.
struct SubstituteModel {
    sim::ParamCircuit qenc;
    sim::ParamCircuit qclassifier;
    std::vector<int> class_qubits;
    bool qenc_frozen = true;

    static SubstituteModel make(sim::ParamCircuit qenc, int clf_qubits, int clf_layers,
                                int num_classes);
    std::vector<double> features(std::span<const double> image_pixels) const;
    std::vector<double> logits(std::span<const double> image_pixels) const;
    int predict(std::span<const double> image_pixels) const;
};

struct ClassifierTrainConfig {
    int epochs = 300;
    double lr = 5e-2;
    double weight_decay = 1e-4;
    double init_scale = 0.3;
    bool use_mixup = true;
    double mixup_alpha = 0.2;
};

/// Transfer training: encoder features are computed once (frozen encoder,
/// bitwise untouched), optional one-shot Mixup within each predicted
/// class, then full-batch cross-entropy training of the classifier against
/// the cleaned soft labels.
SubstituteModel train_classifier(SubstituteModel model,
                                 const std::vector<data::ImageSample> &queried_images,
                                 const cleanse::CleanedDataset &cleaned,
                                 const ClassifierTrainConfig &cfg, std::uint64_t seed,
                                 TrainLog *log = nullptr);

struct BaselineConfig {
    int num_qubits = 4;
    int num_layers = 2;
    OptimConfig optim{.epochs = 100, .batch_size = 32, .lr = 5e-3, .weight_decay = 1e-4};
};

/// The naive baseline: victim-architecture substitute trained on all
/// queried samples with their derived hard labels.
sim::ParamCircuit train_base(const std::vector<std::vector<double>> &inputs,
                             const std::vector<int> &hard_labels, int num_classes,
                             const BaselineConfig &cfg, std::uint64_t seed,
                             TrainLog *log = nullptr);

/// Bootstrap-bagged committee with majority-vote fusion; ties fall back to
/// the summed softmax score.
struct EnsembleModel {
    std::vector<sim::ParamCircuit> members;
    std::vector<int> class_qubits;

    int predict(std::span<const double> input) const;
    std::pair<int, int> param_counts() const;
};

struct QleakConfig {
    int committee = 5;
    BaselineConfig member{};
};

EnsembleModel train_qleak(const std::vector<std::vector<double>> &inputs,
                          const std::vector<int> &hard_labels, int num_classes,
                          const QleakConfig &cfg, std::uint64_t seed);

} // namespace copyqnn::train
