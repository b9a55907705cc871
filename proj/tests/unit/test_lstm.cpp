#include <cmath>
#include <random>

#include "doctest.h"
#include "stsim/grad_check.hpp"
#include "stsim/lstm.hpp"
#include "stsim/model.hpp"
#include "test_util.hpp"

using namespace stsim;

namespace {

LstmParameters random_lstm(std::size_t m, std::size_t h, unsigned seed) {
    LstmParameters p = make_lstm(m, h);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-0.4, 0.4);
    for (Matrix* mat : {&p.w_input, &p.w_forget, &p.w_output, &p.w_cell, &p.u_input, &p.u_forget,
                        &p.u_output, &p.u_cell})
        for (double& x : mat->data) x = dist(rng);
    for (Vec* b : {&p.b_input, &p.b_forget, &p.b_output, &p.b_cell})
        for (double& x : *b) x = dist(rng);
    return p;
}

std::vector<Vec> random_inputs(std::size_t n, std::size_t m, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Vec> out(n, Vec(m));
    for (auto& v : out)
        for (double& x : v) x = dist(rng);
    return out;
}

}  // namespace

TEST_CASE("all-zero parameters give the closed-form step") {
    const LstmParameters p = make_lstm(3, 2);
    LstmState state;
    state.h = {0.3, -0.2};
    state.c = {0.8, 1.4};
    const LstmState next = lstm_step(p, state, {1.0, -1.0, 0.5});
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(next.c[j] == doctest::Approx(0.5 * state.c[j]).epsilon(1e-15));
        CHECK(next.h[j] == doctest::Approx(0.5 * std::tanh(0.5 * state.c[j])).epsilon(1e-15));
    }
}

TEST_CASE("scalar step matches hand arithmetic") {
    LstmParameters p = make_lstm(1, 1);
    p.w_input(0, 0) = 0.5;
    p.u_input(0, 0) = -0.3;
    p.b_input[0] = 0.1;
    p.w_forget(0, 0) = 0.2;
    p.u_forget(0, 0) = 0.4;
    p.b_forget[0] = -0.2;
    p.w_output(0, 0) = -0.6;
    p.u_output(0, 0) = 0.7;
    p.b_output[0] = 0.3;
    p.w_cell(0, 0) = 0.9;
    p.u_cell(0, 0) = -0.5;
    p.b_cell[0] = 0.0;
    LstmState state;
    state.h = {0.2};
    state.c = {-0.4};
    const double x = 0.8;

    auto sigm = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const double i = sigm(0.5 * x - 0.3 * 0.2 + 0.1);
    const double f = sigm(0.2 * x + 0.4 * 0.2 - 0.2);
    const double o = sigm(-0.6 * x + 0.7 * 0.2 + 0.3);
    const double g = std::tanh(0.9 * x - 0.5 * 0.2);
    const double c = f * (-0.4) + i * g;
    const double h = o * std::tanh(c);

    const LstmState next = lstm_step(p, state, {x});
    CHECK(next.c[0] == doctest::Approx(c).epsilon(1e-15));
    CHECK(next.h[0] == doctest::Approx(h).epsilon(1e-15));
}

TEST_CASE("forget bias 2.5 keeps most of the cell") {
    LstmParameters p = make_lstm(2, 1);
    p.b_forget[0] = 2.5;
    LstmState state;
    state.h = {0.0};
    state.c = {1.0};
    const LstmState next = lstm_step(p, state, {0.0, 0.0});
    const double f = 1.0 / (1.0 + std::exp(-2.5));
    CHECK(f == doctest::Approx(0.924141819978757).epsilon(1e-12));
    CHECK(next.c[0] == doctest::Approx(f).epsilon(1e-12));  // candidate is tanh(0)=0
}

TEST_CASE("encode of a single input is one step from the zero state") {
    const LstmParameters p = random_lstm(3, 2, 41);
    const std::vector<Vec> inputs = random_inputs(1, 3, 42);
    const Vec h = lstm_encode_final(p, inputs);
    const LstmState step = lstm_step(p, zero_state(2), inputs[0]);
    CHECK(h == step.h);
}

TEST_CASE("encode is bitwise deterministic") {
    const LstmParameters p = random_lstm(4, 3, 43);
    const std::vector<Vec> inputs = random_inputs(5, 4, 44);
    CHECK(lstm_encode_final(p, inputs) == lstm_encode_final(p, inputs));
}

TEST_CASE("encode agrees with the independent unroll") {
    const LstmParameters p = random_lstm(4, 3, 45);
    const std::vector<Vec> inputs = random_inputs(3, 4, 46);
    const Vec got = lstm_encode_final(p, inputs);
    const Vec want = testutil::ref_lstm_final(p, inputs);
    REQUIRE(got.size() == want.size());
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(std::abs(got[j] - want[j]) < 1e-12);
}

TEST_CASE("encode rejects empty sequences and wrong widths") {
    const LstmParameters p = random_lstm(3, 2, 47);
    CHECK_THROWS_AS(lstm_encode(p, {}), numeric_error);
    CHECK_THROWS_AS(lstm_encode(p, random_inputs(2, 4, 48)), numeric_error);
}

TEST_CASE("hidden state components stay inside (-1,1)") {
    const LstmParameters p = random_lstm(3, 4, 49);
    const std::vector<Vec> inputs = random_inputs(30, 3, 50);
    const LstmForward fwd = lstm_encode(p, inputs);
    for (const auto& step : fwd.steps)
        for (double x : step.h) CHECK(std::abs(x) < 1.0);
}

TEST_CASE("cell state grows at most linearly in the step count") {
    const LstmParameters p = random_lstm(3, 4, 60);
    const std::vector<Vec> inputs = random_inputs(40, 3, 61);
    const LstmForward fwd = lstm_encode(p, inputs);
    for (std::size_t t = 0; t < fwd.steps.size(); ++t)
        for (double c : fwd.steps[t].c)
            CHECK(std::abs(c) <= static_cast<double>(t + 1));  // |c_t| <= t from c_0 = 0
}

TEST_CASE("zero upstream gradient produces zero gradients everywhere") {
    const LstmParameters p = random_lstm(3, 2, 51);
    const LstmForward fwd = lstm_encode(p, random_inputs(4, 3, 52));
    const LstmBackward back = lstm_encode_backward(p, fwd, Vec(2, 0.0));
    for (const Matrix* m : {&back.grads.w_input, &back.grads.u_input, &back.grads.w_forget,
                            &back.grads.u_forget, &back.grads.w_output, &back.grads.u_output,
                            &back.grads.w_cell, &back.grads.u_cell})
        for (double x : m->data) CHECK(x == 0.0);
    for (const Vec& dx : back.d_inputs)
        for (double x : dx) CHECK(x == 0.0);
}

TEST_CASE("backward through time passes the finite-difference check") {
    LstmParameters p = random_lstm(4, 3, 53);
    std::vector<Vec> inputs = random_inputs(5, 4, 54);

    std::mt19937 rng(55);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec proj(3);
    for (double& x : proj) x = dist(rng);

    auto loss = [&]() {
        const Vec h = lstm_encode_final(p, inputs);
        double acc = 0.0;
        for (std::size_t j = 0; j < h.size(); ++j) acc += proj[j] * h[j];
        return acc;
    };

    const LstmForward fwd = lstm_encode(p, inputs);
    const LstmBackward back = lstm_encode_backward(p, fwd, proj);

    struct NamedPair {
        const char* name;
        std::span<double> param;
        std::span<const double> grad;
    };
    LstmParameters& g = const_cast<LstmParameters&>(back.grads);
    const std::vector<NamedPair> pairs = {
        {"w_i", p.w_input.data, g.w_input.data},   {"u_i", p.u_input.data, g.u_input.data},
        {"b_i", p.b_input, g.b_input},             {"w_f", p.w_forget.data, g.w_forget.data},
        {"u_f", p.u_forget.data, g.u_forget.data}, {"b_f", p.b_forget, g.b_forget},
        {"w_o", p.w_output.data, g.w_output.data}, {"u_o", p.u_output.data, g.u_output.data},
        {"b_o", p.b_output, g.b_output},           {"w_c", p.w_cell.data, g.w_cell.data},
        {"u_c", p.u_cell.data, g.u_cell.data},     {"b_c", p.b_cell, g.b_cell},
    };
    for (const NamedPair& np : pairs) {
        const GradCheckReport report = grad_check(loss, np.param, np.grad, 1e-5, np.name);
        INFO(np.name);
        CHECK(report.max_rel_error < 1e-4);
    }
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        const GradCheckReport report =
            grad_check(loss, inputs[t], back.d_inputs[t], 1e-5, "x" + std::to_string(t));
        CHECK(report.max_rel_error < 1e-4);
    }
}

TEST_CASE("gradient reaches the first input") {
    const LstmParameters p = random_lstm(3, 3, 56);
    const std::vector<Vec> inputs = random_inputs(5, 3, 57);
    const LstmForward fwd = lstm_encode(p, inputs);
    Vec upstream(3, 1.0);
    const LstmBackward back = lstm_encode_backward(p, fwd, upstream);
    double magnitude = 0.0;
    for (double x : back.d_inputs.front()) magnitude += std::abs(x);
    CHECK(magnitude > 0.0);
}

TEST_CASE("backward rejects bad inputs") {
    const LstmParameters p = random_lstm(3, 2, 58);
    LstmForward empty;
    CHECK_THROWS_AS(lstm_encode_backward(p, empty, Vec(2, 0.0)), numeric_error);
    const LstmForward fwd = lstm_encode(p, random_inputs(2, 3, 59));
    CHECK_THROWS_AS(lstm_encode_backward(p, fwd, Vec(3, 0.0)), numeric_error);
}
