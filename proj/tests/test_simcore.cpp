#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "copyqnn/checkpoint.hpp"
#include "copyqnn/circuit.hpp"
#include "copyqnn/errors.hpp"
#include "oracles.hpp"

using namespace copyqnn;
using sim::ParamCircuit;
using sim::StateVector;

namespace {

double state_distance(const StateVector &a, const std::vector<oracle::cplx> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        worst = std::max(worst, std::abs(a.amps[i] - b[i]));
    return worst;
}

} // namespace

TEST_CASE("amplitude encoding") {
    SUBCASE("basis vector") {
        const std::vector<double> x = {1, 0, 0, 0};
        const StateVector s = sim::amplitude_encode(x, 2);
        CHECK(s.amps[0].real() == doctest::Approx(1.0));
        for (int i = 1; i < 4; ++i) CHECK(std::abs(s.amps[i]) == 0.0);
    }
    SUBCASE("uniform superposition") {
        const std::vector<double> x = {1, 1, 1, 1};
        const StateVector s = sim::amplitude_encode(x, 2);
        for (int i = 0; i < 4; ++i) CHECK(s.amps[i].real() == doctest::Approx(0.5));
    }
    SUBCASE("hand-normalized 3-4-5") {
        const std::vector<double> x = {3, 4};
        const StateVector s = sim::amplitude_encode(x, 1);
        CHECK(s.amps[0].real() == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(s.amps[1].real() == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("zero-padding and unit norm") {
        const std::vector<double> x = {0.3, -0.7, 0.1};
        const StateVector s = sim::amplitude_encode(x, 3);
        CHECK(std::abs(s.norm() - 1.0) < 1e-12);
        for (std::size_t i = 3; i < s.dim(); ++i) CHECK(std::abs(s.amps[i]) == 0.0);
    }
    SUBCASE("all-zero input rejected") {
        const std::vector<double> x = {0, 0, 0};
        CHECK_THROWS_AS(sim::amplitude_encode(x, 2), DegenerateInputError);
    }
    SUBCASE("oversized input rejected") {
        const std::vector<double> x(5, 1.0);
        CHECK_THROWS_AS(sim::amplitude_encode(x, 2), DimensionError);
    }
}

TEST_CASE("angle-pair encoding") {
    SUBCASE("zero rotations give |0...0>") {
        const std::vector<double> f(8, 0.0);
        const StateVector s = sim::angle_pair_encode(f, 4);
        CHECK(std::abs(s.amps[0] - oracle::cplx{1.0, 0.0}) < 1e-12);
    }
    SUBCASE("pi rotation flips qubit 0") {
        std::vector<double> f(8, 0.0);
        f[0] = 1.0;
        const StateVector s = sim::angle_pair_encode(f, 4);
        CHECK(std::abs(s.amps[1]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(s.amps[0]) < 1e-12);
    }
    SUBCASE("matches dense per-qubit matrix product") {
        const std::vector<double> f = {0.5, 0.25, -0.3, 0.9, 0.0, -1.0, 0.7, 0.1};
        const StateVector s = sim::angle_pair_encode(f, 4);

        std::vector<oracle::cplx> expect(16, 0.0);
        expect[0] = 1.0;
        for (int q = 0; q < 4; ++q) {
            const auto ry = oracle::ry_matrix(std::numbers::pi * f[2 * q], q, 4);
            const auto rz = oracle::rz_matrix(std::numbers::pi * f[2 * q + 1], q, 4);
            expect = oracle::matvec(rz, oracle::matvec(ry, expect));
        }
        CHECK(state_distance(s, expect) < 1e-12);
    }
    SUBCASE("length and range errors") {
        CHECK_THROWS_AS(sim::angle_pair_encode(std::vector<double>(7, 0.0), 4),
                        DimensionError);
        std::vector<double> f(8, 0.0);
        f[3] = 1.5;
        CHECK_THROWS_AS(sim::angle_pair_encode(f, 4), RangeError);
    }
}

TEST_CASE("apply_vqc") {
    SUBCASE("zero angles act as identity") {
        std::mt19937_64 gen(7);
        ParamCircuit circ(3, 2, sim::Encoding::Amplitude);
        const std::vector<double> x = oracle::random_amplitude_input(3, gen);
        const StateVector in = sim::amplitude_encode(x, 3);
        const StateVector out = sim::apply_vqc(in, circ);
        for (std::size_t i = 0; i < in.dim(); ++i)
            CHECK(std::abs(in.amps[i] - out.amps[i]) < 1e-12);
    }
    SUBCASE("single qubit, RY angle pi maps |0> to |1>") {
        ParamCircuit circ(1, 1, sim::Encoding::Amplitude);
        circ.thetas[circ.ry_index(0, 0)] = std::numbers::pi;
        const StateVector out = sim::apply_vqc(StateVector::zero_state(1), circ);
        CHECK(std::abs(out.amps[1]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("random circuits match the dense-matrix oracle") {
        std::mt19937_64 gen(11);
        for (int trial = 0; trial < 20; ++trial) {
            const int nq = 1 + static_cast<int>(gen() % 3);
            const ParamCircuit circ =
                oracle::random_circuit(nq, 2, sim::Encoding::Amplitude, gen);
            const std::vector<double> x = oracle::random_amplitude_input(nq, gen);
            const StateVector in = sim::amplitude_encode(x, nq);

            const StateVector fast = sim::apply_vqc(in, circ);
            std::vector<oracle::cplx> dense(in.amps.begin(), in.amps.end());
            dense = oracle::matvec(oracle::circuit_matrix(circ), dense);
            CHECK(state_distance(fast, dense) < 1e-12);
        }
    }
    SUBCASE("qubit-count mismatch") {
        ParamCircuit circ(3, 1, sim::Encoding::Amplitude);
        StateVector s = StateVector::zero_state(2);
        CHECK_THROWS_AS(sim::apply_vqc_inplace(s, circ), DimensionError);
    }
}

TEST_CASE("norm preservation and unitarity over random gate sequences") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int nq = 2 + static_cast<int>(gen() % 3);
        const ParamCircuit circ =
            oracle::random_circuit(nq, 1 + static_cast<int>(gen() % 3),
                                   sim::Encoding::Amplitude, gen);
        const std::vector<double> x = oracle::random_amplitude_input(nq, gen);
        const StateVector in = sim::amplitude_encode(x, nq);
        StateVector state = sim::apply_vqc(in, circ);
        CHECK(std::abs(state.norm() - 1.0) < 1e-10);

        // inverse: reverse order, negated angles
        const auto gates = sim::gate_sequence(circ);
        for (auto it = gates.rbegin(); it != gates.rend(); ++it)
            sim::apply_gate_inverse(state, *it, circ.thetas[it->theta_index]);
        for (std::size_t i = 0; i < in.dim(); ++i)
            CHECK(std::abs(state.amps[i] - in.amps[i]) < 1e-10);
    }
}

TEST_CASE("z readout") {
    StateVector zero = StateVector::zero_state(1);
    CHECK(sim::z_readout(zero, 0) == doctest::Approx(1.0));

    StateVector one(1);
    one.amps[1] = 1.0;
    CHECK(sim::z_readout(one, 0) == doctest::Approx(-1.0));

    StateVector plus(1);
    plus.amps[0] = plus.amps[1] = 1.0 / std::sqrt(2.0);
    CHECK(sim::z_readout(plus, 0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(sim::z_readout(zero, 1), RangeError);
}

TEST_CASE("forward_features") {
    SUBCASE("zero-angle circuit on e0 gives the all-ones feature vector") {
        ParamCircuit circ(4, 2, sim::Encoding::Amplitude);
        std::vector<double> x(16, 0.0);
        x[0] = 1.0;
        for (double z : sim::forward_features(x, circ))
            CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("features stay within [-1, 1]") {
        std::mt19937_64 gen(31);
        for (int trial = 0; trial < 30; ++trial) {
            const ParamCircuit circ =
                oracle::random_circuit(4, 2, sim::Encoding::Amplitude, gen);
            const std::vector<double> x = oracle::random_amplitude_input(4, gen);
            for (double z : sim::forward_features(x, circ)) {
                CHECK(z >= -1.0 - 1e-12);
                CHECK(z <= 1.0 + 1e-12);
            }
        }
    }
    SUBCASE("fixed seed matches the dense oracle") {
        std::mt19937_64 gen(37);
        const ParamCircuit circ = oracle::random_circuit(3, 2, sim::Encoding::Amplitude, gen);
        const std::vector<double> x = oracle::random_amplitude_input(3, gen);

        const std::vector<double> fast = sim::forward_features(x, circ);
        const StateVector in = sim::amplitude_encode(x, 3);
        std::vector<oracle::cplx> dense(in.amps.begin(), in.amps.end());
        dense = oracle::matvec(oracle::circuit_matrix(circ), dense);
        for (int k = 0; k < 3; ++k) {
            double expect = 0.0;
            for (std::size_t i = 0; i < dense.size(); ++i)
                expect += ((i >> k) & 1 ? -1.0 : 1.0) * std::norm(dense[i]);
            CHECK(fast[k] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("analytic gradients") {
    SUBCASE("zero cotangent gives a zero gradient") {
        std::mt19937_64 gen(41);
        const ParamCircuit circ = oracle::random_circuit(3, 2, sim::Encoding::Amplitude, gen);
        const std::vector<double> x = oracle::random_amplitude_input(3, gen);
        const std::vector<double> cot(3, 0.0);
        for (double g : sim::gradient(x, circ, cot)) CHECK(g == 0.0);
    }
    SUBCASE("single RY analytic value: d<Z>/dtheta = -sin(theta)") {
        ParamCircuit circ(1, 1, sim::Encoding::Amplitude);
        const std::vector<double> x = {1.0};
        const std::vector<double> cot = {1.0};

        circ.thetas[circ.ry_index(0, 0)] = 0.0;
        CHECK(sim::gradient(x, circ, cot)[circ.ry_index(0, 0)] ==
              doctest::Approx(0.0).epsilon(1e-12));

        circ.thetas[circ.ry_index(0, 0)] = std::numbers::pi / 2.0;
        CHECK(sim::gradient(x, circ, cot)[circ.ry_index(0, 0)] ==
              doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("random circuits match central finite differences") {
        std::mt19937_64 gen(43);
        std::uniform_real_distribution<double> cot_dist(-1.0, 1.0);
        for (int trial = 0; trial < 25; ++trial) {
            const int nq = 2 + static_cast<int>(gen() % 5); // up to 6
            const int layers = 1 + static_cast<int>(gen() % 3);
            ParamCircuit circ = oracle::random_circuit(nq, layers, sim::Encoding::Amplitude, gen);
            const std::vector<double> x = oracle::random_amplitude_input(nq, gen);
            std::vector<double> cot(nq);
            for (double &c : cot) c = cot_dist(gen);

            const std::vector<double> analytic = sim::gradient(x, circ, cot);
            const std::vector<double> fd = oracle::finite_difference(
                circ.thetas,
                [&](const std::vector<double> &thetas) {
                    ParamCircuit probe = circ;
                    probe.thetas = thetas;
                    const std::vector<double> f = sim::forward_features(x, probe);
                    double val = 0.0;
                    for (int k = 0; k < nq; ++k) val += cot[k] * f[k];
                    return val;
                });

            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < fd.size(); ++i) {
                num += (analytic[i] - fd[i]) * (analytic[i] - fd[i]);
                den += fd[i] * fd[i];
            }
            CHECK(std::sqrt(num) / std::max(std::sqrt(den), 1e-8) < 1e-5);
        }
    }
}

TEST_CASE("parameter accounting") {
    CHECK(sim::param_counts(4, 4, 8, 4) == std::pair<int, int>{144, 48});
    CHECK(sim::ensemble_param_counts(5, 2, 4) == std::pair<int, int>{120, 40});
    CHECK(sim::param_counts(1, 1, 1, 1) == std::pair<int, int>{6, 2});
    CHECK_THROWS_AS(sim::param_counts(0, 1, 1, 1), ArgumentError);

    const ParamCircuit circ(8, 4, sim::Encoding::Amplitude);
    CHECK(circ.rotation_count() == 96);
    CHECK(circ.entangler_count() == 32);
    CHECK(circ.param_count() == 128);
}

TEST_CASE("checkpoint JSON round-trips angles bit-exactly") {
    std::mt19937_64 gen(53);
    const ParamCircuit circ = oracle::random_circuit(4, 3, sim::Encoding::AnglePair, gen);
    const auto j = sim::circuit_to_json(circ);
    const std::string text = j.dump();
    const ParamCircuit back = sim::circuit_from_json(nlohmann::json::parse(text));
    CHECK(back.num_qubits == circ.num_qubits);
    CHECK(back.num_layers == circ.num_layers);
    CHECK(back.encoding == circ.encoding);
    REQUIRE(back.thetas.size() == circ.thetas.size());
    for (std::size_t i = 0; i < circ.thetas.size(); ++i)
        CHECK(back.thetas[i] == circ.thetas[i]); // bitwise
}
