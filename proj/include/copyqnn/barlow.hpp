#pragma once

#include <cstddef>
#include <vector>

namespace copyqnn::train {

/// Row-major N x D batch of embeddings.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double &at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct BarlowResult {
    double loss = 0.0;
    Mat grad_z1;
    Mat grad_z2;
    Mat cross_correlation;       // D x D, after standardization
    int degenerate_columns = 0;  // columns whose std fell below std_eps
};

/// Each column of z1/z2 is standardized to zero mean and unit variance over
/// the batch (population std, guarded below by std_eps), C = z1~^T z2~ / N,
/// loss = sum_i (1 - C_ii)^2 + lambda * sum_{i != j} C_ij^2. Gradients are
/// analytic through the standardization.
BarlowResult barlow_loss(const Mat &z1, const Mat &z2, double lambda, double std_eps);

} // namespace copyqnn::train
