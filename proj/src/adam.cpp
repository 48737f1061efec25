#include "copyqnn/adam.hpp"

#include <cmath>
#include <string>

#include "copyqnn/errors.hpp"

namespace copyqnn::train {

void adam_step(AdamState &state, std::span<double> theta, std::span<const double> grad) {
    if (theta.size() != grad.size() || theta.size() != state.m.size())
        throw DimensionError("adam_step: parameter/gradient/moment sizes disagree");
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (!std::isfinite(grad[i]))
            throw TrainingError("non-finite gradient at parameter " + std::to_string(i) +
                                " (value " + std::to_string(grad[i]) + ")");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (state.weight_decay != 0.0)
            theta[i] -= state.lr * state.weight_decay * theta[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        theta[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

} // namespace copyqnn::train
