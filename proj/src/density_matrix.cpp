#include "copyqnn/density_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "copyqnn/errors.hpp"

namespace copyqnn::noise {

DensityMatrix DensityMatrix::from_pure(const sim::StateVector &psi) {
    DensityMatrix rho(psi.num_qubits);
    const std::size_t d = rho.dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            rho.m[r * d + c] = psi.amps[r] * std::conj(psi.amps[c]);
    return rho;
}

double DensityMatrix::trace_real() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += at(i, i).real();
    return t;
}

double DensityMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = r; c < dim(); ++c)
            worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
    return worst;
}

std::vector<double> DensityMatrix::diagonal_probabilities() const {
    std::vector<double> p(dim());
    double total = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        p[i] = std::max(0.0, at(i, i).real());
        total += p[i];
    }
    if (total <= 0.0) throw Error("density matrix has vanishing trace");
    for (double &v : p) v /= total;
    return p;
}

namespace {

void check_qubit(const DensityMatrix &rho, int q) {
    if (q < 0 || q >= rho.num_qubits)
        throw RangeError("qubit index " + std::to_string(q) + " out of range");
}

/// rho -> M rho M^dagger for a 2x2 matrix on qubit q.
void conjugate_1q(DensityMatrix &rho, int q, const cplx m[2][2]) {
    const std::size_t d = rho.dim();
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
    const std::size_t half = d >> 1;
    // left multiply: rows mix within each column
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t r0 = ((i & hi) << 1) | (i & lo);
            const std::size_t r1 = r0 | mask;
            const cplx a0 = rho.m[r0 * d + c];
            const cplx a1 = rho.m[r1 * d + c];
            rho.m[r0 * d + c] = m[0][0] * a0 + m[0][1] * a1;
            rho.m[r1 * d + c] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
    // right multiply by M^dagger: columns mix within each row
    for (std::size_t r = 0; r < d; ++r) {
        cplx *row = &rho.m[r * d];
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t c0 = ((i & hi) << 1) | (i & lo);
            const std::size_t c1 = c0 | mask;
            const cplx a0 = row[c0];
            const cplx a1 = row[c1];
            row[c0] = a0 * std::conj(m[0][0]) + a1 * std::conj(m[0][1]);
            row[c1] = a0 * std::conj(m[1][0]) + a1 * std::conj(m[1][1]);
        }
    }
}

} // namespace

void apply_rz(DensityMatrix &rho, int q, double theta) {
    check_qubit(rho, q);
    const cplx m[2][2] = {{std::polar(1.0, -theta / 2.0), 0.0},
                          {0.0, std::polar(1.0, theta / 2.0)}};
    conjugate_1q(rho, q, m);
}

void apply_ry(DensityMatrix &rho, int q, double theta) {
    check_qubit(rho, q);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const cplx m[2][2] = {{c, -s}, {s, c}};
    conjugate_1q(rho, q, m);
}

void apply_crx(DensityMatrix &rho, int control, int target, double theta) {
    check_qubit(rho, control);
    check_qubit(rho, target);
    if (control == target) throw RangeError("CRX control equals target");
    const std::size_t d = rho.dim();
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    const double co = std::cos(theta / 2.0);
    const cplx is{0.0, -std::sin(theta / 2.0)};
    // left multiply
    for (std::size_t col = 0; col < d; ++col) {
        for (std::size_t r0 = 0; r0 < d; ++r0) {
            if ((r0 & tmask) || !(r0 & cmask)) continue;
            const std::size_t r1 = r0 | tmask;
            const cplx a0 = rho.m[r0 * d + col];
            const cplx a1 = rho.m[r1 * d + col];
            rho.m[r0 * d + col] = co * a0 + is * a1;
            rho.m[r1 * d + col] = is * a0 + co * a1;
        }
    }
    // right multiply by U^dagger
    const cplx isc = std::conj(is);
    for (std::size_t r = 0; r < d; ++r) {
        cplx *row = &rho.m[r * d];
        for (std::size_t c0 = 0; c0 < d; ++c0) {
            if ((c0 & tmask) || !(c0 & cmask)) continue;
            const std::size_t c1 = c0 | tmask;
            const cplx a0 = row[c0];
            const cplx a1 = row[c1];
            row[c0] = a0 * co + a1 * isc;
            row[c1] = a0 * isc + a1 * co;
        }
    }
}

void depolarize_1q(DensityMatrix &rho, int q, double p) {
    check_qubit(rho, q);
    if (p == 0.0) return;
    if (p < 0.0 || p > 4.0 / 3.0) throw RangeError("depolarizing rate outside [0, 4/3]");
    const std::size_t d = rho.dim();
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t r = 0; r < d; ++r) {
        if (r & mask) continue;
        for (std::size_t c = 0; c < d; ++c) {
            if (c & mask) continue;
            const std::size_t r1 = r | mask, c1 = c | mask;
            cplx &d00 = rho.m[r * d + c];
            cplx &d01 = rho.m[r * d + c1];
            cplx &d10 = rho.m[r1 * d + c];
            cplx &d11 = rho.m[r1 * d + c1];
            const cplx avg = (d00 + d11) * 0.5;
            d00 = (1.0 - p) * d00 + p * avg;
            d11 = (1.0 - p) * d11 + p * avg;
            d01 *= (1.0 - p);
            d10 *= (1.0 - p);
        }
    }
}

void depolarize_2q(DensityMatrix &rho, int a, int b, double p) {
    check_qubit(rho, a);
    check_qubit(rho, b);
    if (a == b) throw RangeError("two-qubit depolarizing needs distinct qubits");
    if (p == 0.0) return;
    if (p < 0.0 || p > 16.0 / 15.0)
        throw RangeError("two-qubit depolarizing rate outside [0, 16/15]");
    const std::size_t d = rho.dim();
    const std::size_t amask = std::size_t{1} << a;
    const std::size_t bmask = std::size_t{1} << b;
    const std::size_t pair = amask | bmask;
    for (std::size_t r = 0; r < d; ++r) {
        if (r & pair) continue;
        for (std::size_t c = 0; c < d; ++c) {
            if (c & pair) continue;
            // sub-block over the two qubits' four settings
            cplx avg{0.0, 0.0};
            for (std::size_t s : {std::size_t{0}, amask, bmask, pair})
                avg += rho.m[(r | s) * d + (c | s)];
            avg *= 0.25;
            for (std::size_t sr : {std::size_t{0}, amask, bmask, pair}) {
                for (std::size_t sc : {std::size_t{0}, amask, bmask, pair}) {
                    cplx &e = rho.m[(r | sr) * d + (c | sc)];
                    e *= (1.0 - p);
                    if (sr == sc) e += p * avg;
                }
            }
        }
    }
}

void bit_flip(DensityMatrix &rho, int q, double p) {
    check_qubit(rho, q);
    if (p == 0.0) return;
    if (p < 0.0 || p > 1.0) throw RangeError("bit-flip probability outside [0, 1]");
    const std::size_t d = rho.dim();
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t r = 0; r < d; ++r) {
        if (r & mask) continue;
        for (std::size_t c = 0; c < d; ++c) {
            if (c & mask) continue;
            const std::size_t r1 = r | mask, c1 = c | mask;
            cplx &d00 = rho.m[r * d + c];
            cplx &d01 = rho.m[r * d + c1];
            cplx &d10 = rho.m[r1 * d + c];
            cplx &d11 = rho.m[r1 * d + c1];
            const cplx n00 = (1.0 - p) * d00 + p * d11;
            const cplx n11 = (1.0 - p) * d11 + p * d00;
            const cplx n01 = (1.0 - p) * d01 + p * d10;
            const cplx n10 = (1.0 - p) * d10 + p * d01;
            d00 = n00;
            d01 = n01;
            d10 = n10;
            d11 = n11;
        }
    }
}

void apply_householder_encoding(DensityMatrix &rho, std::span<const double> amplitudes) {
    const std::size_t d = rho.dim();
    if (amplitudes.size() > d)
        throw DimensionError("encoded vector longer than the register dimension");
    // normalized target column
    double sq = 0.0;
    for (double v : amplitudes) sq += v * v;
    if (sq == 0.0) throw DegenerateInputError("amplitude encoding of an all-zero vector");
    std::vector<double> psi(d, 0.0);
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) psi[i] = amplitudes[i] * inv;

    // v proportional to e0 - psi; H = I - 2 v v^T maps e0 to psi
    std::vector<double> v(d);
    double vn = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        v[i] = (i == 0 ? 1.0 : 0.0) - psi[i];
        vn += v[i] * v[i];
    }
    if (vn < 1e-30) return; // psi == e0, identity
    const double s = 1.0 / std::sqrt(vn);
    for (double &x : v) x *= s;

    // H rho H = rho - 2 v u^dag - 2 u v^T + 4 (v^T u) v v^T, u = rho v
    std::vector<cplx> u(d, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < d; ++r) {
        cplx acc{0.0, 0.0};
        const cplx *row = &rho.m[r * d];
        for (std::size_t c = 0; c < d; ++c) acc += row[c] * v[c];
        u[r] = acc;
    }
    cplx vu{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) vu += v[i] * u[i];
    for (std::size_t r = 0; r < d; ++r) {
        cplx *row = &rho.m[r * d];
        for (std::size_t c = 0; c < d; ++c)
            row[c] += -2.0 * v[r] * std::conj(u[c]) - 2.0 * u[r] * v[c] +
                      4.0 * vu * v[r] * v[c];
    }
}

std::vector<double> zero_prob_all(const DensityMatrix &rho) {
    const std::vector<double> diag = rho.diagonal_probabilities();
    std::vector<double> out(rho.num_qubits, 0.0);
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (int k = 0; k < rho.num_qubits; ++k)
            if (!((i >> k) & 1)) out[k] += diag[i];
    return out;
}

} // namespace copyqnn::noise
