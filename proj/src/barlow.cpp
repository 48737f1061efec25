#include "copyqnn/barlow.hpp"

#include <cmath>

#include "copyqnn/errors.hpp"

namespace copyqnn::train {

namespace {

struct Standardized {
    Mat z;                       // standardized values
    std::vector<double> inv_std; // 1/std per column (guarded)
    std::vector<bool> guarded;   // column hit the std_eps floor
};

Standardized standardize(const Mat &z, double std_eps) {
    Standardized out;
    out.z = Mat(z.rows, z.cols);
    out.inv_std.resize(z.cols);
    out.guarded.assign(z.cols, false);
    const double n = static_cast<double>(z.rows);
    for (std::size_t c = 0; c < z.cols; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < z.rows; ++r) mean += z.at(r, c);
        mean /= n;
        double var = 0.0;
        for (std::size_t r = 0; r < z.rows; ++r) {
            const double d = z.at(r, c) - mean;
            var += d * d;
        }
        var /= n;
        double sd = std::sqrt(var);
        if (sd < std_eps) {
            sd = std_eps;
            out.guarded[c] = true;
        }
        out.inv_std[c] = 1.0 / sd;
        for (std::size_t r = 0; r < z.rows; ++r)
            out.z.at(r, c) = (z.at(r, c) - mean) * out.inv_std[c];
    }
    return out;
}

/// Backward through column standardization: given dL/dz~, produce dL/dz.
/// For guarded columns the std is a constant, so only the mean term remains.
Mat standardize_backward(const Standardized &s, const Mat &grad_tilde) {
    Mat grad(s.z.rows, s.z.cols);
    const double n = static_cast<double>(s.z.rows);
    for (std::size_t c = 0; c < s.z.cols; ++c) {
        double g_mean = 0.0;
        double gz_mean = 0.0;
        for (std::size_t r = 0; r < s.z.rows; ++r) {
            g_mean += grad_tilde.at(r, c);
            gz_mean += grad_tilde.at(r, c) * s.z.at(r, c);
        }
        g_mean /= n;
        gz_mean /= n;
        for (std::size_t r = 0; r < s.z.rows; ++r) {
            double g = grad_tilde.at(r, c) - g_mean;
            if (!s.guarded[c]) g -= s.z.at(r, c) * gz_mean;
            grad.at(r, c) = g * s.inv_std[c];
        }
    }
    return grad;
}

} // namespace

BarlowResult barlow_loss(const Mat &z1, const Mat &z2, double lambda, double std_eps) {
    if (z1.rows != z2.rows || z1.cols != z2.cols)
        throw DimensionError("embedding batches have different shapes");
    if (z1.rows < 2) throw ArgumentError("batch size must be >= 2");
    if (z1.cols < 1) throw ArgumentError("embedding dimension must be >= 1");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw RangeError("lambda must lie in [0, 1]");

    const Standardized s1 = standardize(z1, std_eps);
    const Standardized s2 = standardize(z2, std_eps);
    const std::size_t n = z1.rows;
    const std::size_t d = z1.cols;

    Mat corr(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t b = 0; b < n; ++b) acc += s1.z.at(b, i) * s2.z.at(b, j);
            corr.at(i, j) = acc / static_cast<double>(n);
        }

    double loss = 0.0;
    Mat dC(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) {
                const double diff = 1.0 - corr.at(i, i);
                loss += diff * diff;
                dC.at(i, i) = -2.0 * diff;
            } else {
                loss += lambda * corr.at(i, j) * corr.at(i, j);
                dC.at(i, j) = 2.0 * lambda * corr.at(i, j);
            }
        }
    }

    // dL/dz1~ = z2~ dC^T / N, dL/dz2~ = z1~ dC / N
    Mat g1t(n, d), g2t(n, d);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc1 = 0.0, acc2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                acc1 += dC.at(i, j) * s2.z.at(b, j);
                acc2 += dC.at(j, i) * s1.z.at(b, j);
            }
            g1t.at(b, i) = acc1 / static_cast<double>(n);
            g2t.at(b, i) = acc2 / static_cast<double>(n);
        }
    }

    BarlowResult res;
    res.loss = loss;
    res.grad_z1 = standardize_backward(s1, g1t);
    res.grad_z2 = standardize_backward(s2, g2t);
    res.cross_correlation = std::move(corr);
    for (std::size_t c = 0; c < d; ++c)
        res.degenerate_columns += (s1.guarded[c] || s2.guarded[c]) ? 1 : 0;
    return res;
}

} // namespace copyqnn::train
