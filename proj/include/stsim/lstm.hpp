#pragma once

#include <vector>

#include "stsim/kernel.hpp"

namespace stsim {

/// Standard LSTM without peepholes:
///   i = sigmoid(W_i x + U_i h + b_i)      f = sigmoid(W_f x + U_f h + b_f)
///   o = sigmoid(W_o x + U_o h + b_o)      g = tanh(W_c x + U_c h + b_c)
///   c' = f*c + i*g                        h' = o * tanh(c')
struct LstmParameters {
    std::size_t input_dim = 0;   // m
    std::size_t hidden_dim = 0;  // H
    Matrix w_input, w_forget, w_output, w_cell;  // H x m
    Matrix u_input, u_forget, u_output, u_cell;  // H x H
    Vec b_input, b_forget, b_output, b_cell;     // H

    void validate() const;
};

LstmParameters make_lstm(std::size_t input_dim, std::size_t hidden_dim);

struct LstmState {
    Vec h;
    Vec c;
};

LstmState zero_state(std::size_t hidden_dim);

LstmState lstm_step(const LstmParameters& params, const LstmState& state, const Vec& x);

struct LstmStepCache {
    Vec x, h_prev, c_prev;
    Vec gate_i, gate_f, gate_o, cell_cand;  // post-activation gate values
    Vec c, tanh_c, h;
};

struct LstmForward {
    std::vector<LstmStepCache> steps;

    const Vec& h_final() const { return steps.back().h; }
};

/// Runs the recurrence from the zero state and keeps every activation for the
/// backward pass. The final hidden state is the sentence embedding.
LstmForward lstm_encode(const LstmParameters& params, const std::vector<Vec>& inputs);

/// Convenience forward-only encode.
Vec lstm_encode_final(const LstmParameters& params, const std::vector<Vec>& inputs);

struct LstmBackward {
    LstmParameters grads;       // same shapes as the parameters
    std::vector<Vec> d_inputs;  // gradient w.r.t. every input vector
};

/// Full backpropagation through time, no truncation, seeded by the gradient
/// on the final hidden state.
LstmBackward lstm_encode_backward(const LstmParameters& params, const LstmForward& forward,
                                  const Vec& d_h_final);

}  // namespace stsim
