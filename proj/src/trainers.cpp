#include "copyqnn/trainers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "copyqnn/adam.hpp"
#include "copyqnn/csv.hpp"
#include "copyqnn/errors.hpp"
#include "copyqnn/rng.hpp"

namespace copyqnn::train {

void write_train_log(const TrainLog &log, const std::filesystem::path &path) {
    csv::Writer w(path);
    w.row({"epoch", "loss", "train_acc", "test_acc"});
    for (const TrainLogEntry &e : log)
        w.row({std::to_string(e.epoch), csv::format_double(e.loss),
               csv::format_double(e.train_acc), csv::format_double(e.test_acc)});
}

std::vector<double> one_hot(int label, int num_classes) {
    std::vector<double> y(num_classes, 0.0);
    y.at(label) = 1.0;
    return y;
}

namespace {

void init_angles(sim::ParamCircuit &circ, double scale, std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> uni(-scale, scale);
    for (double &t : circ.thetas) t = uni(gen);
}

std::vector<double> softmax_stable(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double &x : out) x /= sum;
    return out;
}

int argmax(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

/// Cross-entropy of one sample over logits scale*z_sel; fills the
/// full-feature cotangent with scale * (softmax - target) on the class
/// qubits.
double sample_loss_and_cotangent(const sim::ParamCircuit &circ,
                                 const std::vector<int> &class_qubits,
                                 std::span<const double> input,
                                 std::span<const double> target, double logit_scale,
                                 std::vector<double> &cotangent,
                                 std::vector<double> &features_out) {
    features_out = sim::forward_features(input, circ);
    std::vector<double> logits(class_qubits.size());
    for (std::size_t j = 0; j < class_qubits.size(); ++j)
        logits[j] = logit_scale * features_out[class_qubits[j]];
    const std::vector<double> p = softmax_stable(logits);

    double loss = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        loss -= target[j] * std::log(std::max(p[j], 1e-300));

    std::fill(cotangent.begin(), cotangent.end(), 0.0);
    for (std::size_t j = 0; j < class_qubits.size(); ++j)
        cotangent[class_qubits[j]] = logit_scale * (p[j] - target[j]);
    return loss;
}

double dataset_accuracy(const sim::ParamCircuit &circ, const std::vector<int> &class_qubits,
                        const LabeledVectors &data) {
    if (data.inputs.empty()) return 0.0;
    long correct = 0;
    for (std::size_t i = 0; i < data.inputs.size(); ++i) {
        const int pred = predict(circ, class_qubits, data.inputs[i]);
        const int truth = argmax(data.targets[i]);
        if (pred == truth) ++correct;
    }
    return static_cast<double>(correct) / data.inputs.size();
}

} // namespace

std::vector<double> class_probabilities(const sim::ParamCircuit &circ,
                                        const std::vector<int> &class_qubits,
                                        std::span<const double> input) {
    const std::vector<double> z = sim::forward_features(input, circ);
    std::vector<double> logits(class_qubits.size());
    for (std::size_t j = 0; j < class_qubits.size(); ++j) logits[j] = z[class_qubits[j]];
    return softmax_stable(logits);
}

int predict(const sim::ParamCircuit &circ, const std::vector<int> &class_qubits,
            std::span<const double> input) {
    const std::vector<double> z = sim::forward_features(input, circ);
    int best = 0;
    for (std::size_t j = 1; j < class_qubits.size(); ++j)
        if (z[class_qubits[j]] > z[class_qubits[best]]) best = static_cast<int>(j);
    return best;
}

double accuracy(const std::function<int(std::span<const double>)> &predictor,
                const std::vector<std::vector<double>> &inputs,
                const std::vector<int> &labels) {
    if (inputs.empty() || inputs.size() != labels.size())
        throw ArgumentError("accuracy needs equal nonempty inputs and labels");
    long correct = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (predictor(inputs[i]) == labels[i]) ++correct;
    return static_cast<double>(correct) / inputs.size();
}

sim::ParamCircuit train_supervised(sim::ParamCircuit circ,
                                   const std::vector<int> &class_qubits,
                                   const LabeledVectors &train_data,
                                   const LabeledVectors *eval_data, const OptimConfig &cfg,
                                   std::uint64_t seed, TrainLog *log) {
    if (train_data.inputs.empty()) throw TrainingError("empty training set");
    if (train_data.inputs.size() != train_data.targets.size())
        throw DimensionError("inputs and targets disagree in length");

    auto gen = rng::engine(seed, "supervised");
    init_angles(circ, cfg.init_scale, gen);

    AdamState opt(circ.param_count(), cfg.lr, cfg.weight_decay);
    const std::size_t n = train_data.inputs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> cotangent(circ.num_qubits, 0.0);
    std::vector<double> features;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), gen);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            std::vector<double> grad(circ.param_count(), 0.0);
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t i = order[k];
                epoch_loss += sample_loss_and_cotangent(circ, class_qubits,
                                                        train_data.inputs[i],
                                                        train_data.targets[i],
                                                        cfg.logit_scale, cotangent,
                                                        features);
                const std::vector<double> g =
                    sim::gradient(train_data.inputs[i], circ, cotangent);
                for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += g[p];
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (double &g : grad) g *= inv;
            adam_step(opt, circ.thetas, grad);
        }
        if (log) {
            TrainLogEntry e;
            e.epoch = epoch;
            e.loss = epoch_loss / static_cast<double>(n);
            e.train_acc = dataset_accuracy(circ, class_qubits, train_data);
            e.test_acc = eval_data ? dataset_accuracy(circ, class_qubits, *eval_data) : 0.0;
            log->push_back(e);
        }
    }
    return circ;
}

service::VictimModel train_victim(const data::BinaryTask &task,
                                  const VictimTrainConfig &cfg, std::uint64_t seed,
                                  TrainLog *log) {
    if (task.train.empty()) throw TrainingError("victim task has no training data");

    LabeledVectors train_data;
    train_data.inputs = data::resized_inputs(task.train, cfg.input_side, cfg.anti_alias_sigma);
    for (const data::ImageSample &img : task.train)
        train_data.targets.push_back(one_hot(img.label.value(), 2));

    LabeledVectors eval_data;
    eval_data.inputs = data::resized_inputs(task.test, cfg.input_side, cfg.anti_alias_sigma);
    for (const data::ImageSample &img : task.test)
        eval_data.targets.push_back(one_hot(img.label.value(), 2));

    service::VictimModel victim =
        service::VictimModel::untrained(cfg.num_qubits, cfg.num_layers, 2);
    victim.circuit = train_supervised(victim.circuit, victim.class_qubits, train_data,
                                      task.test.empty() ? nullptr : &eval_data, cfg.optim,
                                      seed, log);
    victim.trained = true;
    return victim;
}

PretrainResult pretrain_qenc(const std::vector<data::ImageSample> &source_images,
                             const BarlowConfig &cfg, const data::AugmentConfig &aug,
                             int num_qubits, int num_layers, std::uint64_t seed) {
    if (source_images.size() < 2)
        throw TrainingError("contrastive pretraining needs at least two source images");
    if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0))
        throw RangeError("lambda must lie in [0, 1]");

    sim::ParamCircuit qenc(num_qubits, num_layers, sim::Encoding::Amplitude);
    auto gen = rng::engine(seed, "pretrain");
    init_angles(qenc, cfg.init_scale, gen);

    AdamState opt(qenc.param_count(), cfg.lr, cfg.weight_decay);
    const std::size_t n = source_images.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    PretrainResult res;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), gen);
        double epoch_loss = 0.0;
        int batches = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            const std::size_t bs = stop - start;
            if (bs < 2) continue; // correlation over a single row is undefined

            std::vector<std::vector<double>> view1(bs), view2(bs);
            Mat z1(bs, num_qubits), z2(bs, num_qubits);
            for (std::size_t k = 0; k < bs; ++k) {
                const std::size_t i = order[start + k];
                auto pair_gen = rng::engine(seed, "augment",
                                            {static_cast<std::uint64_t>(epoch),
                                             static_cast<std::uint64_t>(i)});
                auto [a, b] = data::augment_pair(source_images[i], aug, pair_gen);
                view1[k] = data::flatten(a);
                view2[k] = data::flatten(b);
                const std::vector<double> f1 = sim::forward_features(view1[k], qenc);
                const std::vector<double> f2 = sim::forward_features(view2[k], qenc);
                for (int c = 0; c < num_qubits; ++c) {
                    z1.at(k, c) = f1[c];
                    z2.at(k, c) = f2[c];
                }
            }

            const BarlowResult bl = barlow_loss(z1, z2, cfg.lambda, cfg.std_eps);
            epoch_loss += bl.loss;
            ++batches;

            std::vector<double> grad(qenc.param_count(), 0.0);
            std::vector<double> cot(num_qubits);
            for (std::size_t k = 0; k < bs; ++k) {
                for (int c = 0; c < num_qubits; ++c) cot[c] = bl.grad_z1.at(k, c);
                std::vector<double> g = sim::gradient(view1[k], qenc, cot);
                for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += g[p];
                for (int c = 0; c < num_qubits; ++c) cot[c] = bl.grad_z2.at(k, c);
                g = sim::gradient(view2[k], qenc, cot);
                for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += g[p];
            }
            adam_step(opt, qenc.thetas, grad);
        }
        if (batches == 0) throw TrainingError("batch size leaves no usable batches");
        res.loss_history.push_back(epoch_loss / batches);
    }
    res.qenc = std::move(qenc);
    return res;
}

SubstituteModel SubstituteModel::make(sim::ParamCircuit qenc, int clf_qubits,
                                      int clf_layers, int num_classes) {
    SubstituteModel m;
    m.qenc = std::move(qenc);
    m.qclassifier = sim::ParamCircuit(clf_qubits, clf_layers, sim::Encoding::AnglePair);
    for (int j = 0; j < num_classes; ++j) m.class_qubits.push_back(j);
    return m;
}

std::vector<double> SubstituteModel::features(std::span<const double> image_pixels) const {
    return sim::forward_features(image_pixels, qenc);
}

std::vector<double> SubstituteModel::logits(std::span<const double> image_pixels) const {
    const std::vector<double> f = features(image_pixels);
    const std::vector<double> z = sim::forward_features(f, qclassifier);
    std::vector<double> out(class_qubits.size());
    for (std::size_t j = 0; j < class_qubits.size(); ++j) out[j] = z[class_qubits[j]];
    return out;
}

int SubstituteModel::predict(std::span<const double> image_pixels) const {
    const std::vector<double> l = logits(image_pixels);
    int best = 0;
    for (int j = 1; j < static_cast<int>(l.size()); ++j)
        if (l[j] > l[best]) best = j;
    return best;
}

SubstituteModel train_classifier(SubstituteModel model,
                                 const std::vector<data::ImageSample> &queried_images,
                                 const cleanse::CleanedDataset &cleaned,
                                 const ClassifierTrainConfig &cfg, std::uint64_t seed,
                                 TrainLog *log) {
    if (cleaned.retained.empty()) throw TrainingError("cleaned dataset is empty");
    if (!model.qenc_frozen) throw TrainingError("encoder must be frozen during transfer");

    const int d = static_cast<int>(model.class_qubits.size());
    auto gen = rng::engine(seed, "classifier");
    init_angles(model.qclassifier, cfg.init_scale, gen);

    // frozen-encoder features, computed once; targets are the derived hard
    // labels (Mixup below blends them into genuinely soft targets)
    LabeledVectors train_data;
    for (const cleanse::CleanedSample &s : cleaned.retained) {
        train_data.inputs.push_back(
            model.features(data::flatten(queried_images.at(s.sample_index))));
        train_data.targets.push_back(one_hot(s.hard_label, d));
    }

    if (cfg.use_mixup) {
        // one-shot augmentation: each retained sample mixed with a partner
        // of the same predicted class
        std::vector<std::vector<int>> by_class(d);
        for (std::size_t i = 0; i < cleaned.retained.size(); ++i)
            by_class[cleaned.retained[i].hard_label].push_back(static_cast<int>(i));
        for (std::size_t i = 0; i < cleaned.retained.size(); ++i) {
            const cleanse::CleanedSample &a = cleaned.retained[i];
            const std::vector<int> &pool = by_class[a.hard_label];
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            const cleanse::CleanedSample &b = cleaned.retained[pool[pick(gen)]];

            data::SoftLabeled sa{queried_images.at(a.sample_index), one_hot(a.hard_label, d)};
            data::SoftLabeled sb{queried_images.at(b.sample_index), one_hot(b.hard_label, d)};
            const data::SoftLabeled mixed = data::mixup(sa, sb, cfg.mixup_alpha, gen);
            train_data.inputs.push_back(model.features(data::flatten(mixed.image)));
            train_data.targets.push_back(mixed.soft_label);
        }
    }

    // full batch, matching the size of the (augmented) queried set
    OptimConfig optim;
    optim.epochs = cfg.epochs;
    optim.batch_size = static_cast<int>(train_data.inputs.size());
    optim.lr = cfg.lr;
    optim.weight_decay = cfg.weight_decay;
    optim.init_scale = cfg.init_scale;

    const std::vector<double> qenc_before = model.qenc.thetas;
    sim::ParamCircuit trained = model.qclassifier;
    // train_supervised re-initializes; seed stream shared with this function
    trained = train_supervised(std::move(trained), model.class_qubits, train_data, nullptr,
                               optim, rng::derive_seed(seed, "clf-train"), log);
    model.qclassifier = std::move(trained);
    if (model.qenc.thetas != qenc_before)
        throw TrainingError("frozen encoder parameters changed during transfer");
    return model;
}

sim::ParamCircuit train_base(const std::vector<std::vector<double>> &inputs,
                             const std::vector<int> &hard_labels, int num_classes,
                             const BaselineConfig &cfg, std::uint64_t seed,
                             TrainLog *log) {
    if (inputs.size() != hard_labels.size())
        throw DimensionError("inputs and labels disagree in length");
    LabeledVectors train_data;
    train_data.inputs = inputs;
    for (int y : hard_labels) train_data.targets.push_back(one_hot(y, num_classes));

    std::vector<int> class_qubits(num_classes);
    std::iota(class_qubits.begin(), class_qubits.end(), 0);
    sim::ParamCircuit circ(cfg.num_qubits, cfg.num_layers, sim::Encoding::Amplitude);
    return train_supervised(std::move(circ), class_qubits, train_data, nullptr, cfg.optim,
                            seed, log);
}

int EnsembleModel::predict(std::span<const double> input) const {
    std::vector<int> votes(class_qubits.size(), 0);
    std::vector<double> score_sum(class_qubits.size(), 0.0);
    for (const sim::ParamCircuit &member : members) {
        const std::vector<double> p = class_probabilities(member, class_qubits, input);
        int best = 0;
        for (std::size_t j = 1; j < p.size(); ++j)
            if (p[j] > p[best]) best = static_cast<int>(j);
        votes[best] += 1;
        for (std::size_t j = 0; j < p.size(); ++j) score_sum[j] += p[j];
    }
    int winner = 0;
    for (std::size_t j = 1; j < votes.size(); ++j) {
        if (votes[j] > votes[winner] ||
            (votes[j] == votes[winner] && score_sum[j] > score_sum[winner]))
            winner = static_cast<int>(j);
    }
    return winner;
}

std::pair<int, int> EnsembleModel::param_counts() const {
    int one_q = 0, two_q = 0;
    for (const sim::ParamCircuit &m : members) {
        one_q += m.rotation_count();
        two_q += m.entangler_count();
    }
    return {one_q, two_q};
}

EnsembleModel train_qleak(const std::vector<std::vector<double>> &inputs,
                          const std::vector<int> &hard_labels, int num_classes,
                          const QleakConfig &cfg, std::uint64_t seed) {
    const std::size_t n = inputs.size();
    if (n < static_cast<std::size_t>(cfg.committee))
        throw TrainingError("fewer samples than committee members");

    EnsembleModel ensemble;
    ensemble.class_qubits.resize(num_classes);
    std::iota(ensemble.class_qubits.begin(), ensemble.class_qubits.end(), 0);

    for (int member = 0; member < cfg.committee; ++member) {
        // bootstrap bag: n draws with replacement
        auto bag_gen = rng::engine(seed, "bag", {static_cast<std::uint64_t>(member)});
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::vector<double>> bag_inputs;
        std::vector<int> bag_labels;
        bag_inputs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = pick(bag_gen);
            bag_inputs.push_back(inputs[j]);
            bag_labels.push_back(hard_labels[j]);
        }
        ensemble.members.push_back(
            train_base(bag_inputs, bag_labels, num_classes, cfg.member,
                       rng::derive_seed(seed, "member", {static_cast<std::uint64_t>(member)})));
    }
    return ensemble;
}

} // namespace copyqnn::train
