#pragma once

#include <span>
#include <vector>

namespace copyqnn::train {

/// Adam with decoupled weight decay: theta <- theta - lr*wd*theta before
/// the moment update, then the standard bias-corrected step.
struct AdamState {
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;
    double lr = 5e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;

    AdamState() = default;
    AdamState(std::size_t num_params, double lr_, double weight_decay_)
        : m(num_params, 0.0), v(num_params, 0.0), lr(lr_), weight_decay(weight_decay_) {}
};

/// One update in place. Throws TrainingError on non-finite gradients.
void adam_step(AdamState &state, std::span<double> theta, std::span<const double> grad);

} // namespace copyqnn::train
