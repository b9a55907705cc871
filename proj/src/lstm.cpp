#include "stsim/lstm.hpp"

#include <cmath>

namespace stsim {

namespace {

void check_gate(const Matrix& w, const Matrix& u, const Vec& b, std::size_t m, std::size_t h,
                const char* gate) {
    if (w.rows != h || w.cols != m || u.rows != h || u.cols != h || b.size() != h)
        throw numeric_error(std::string("lstm: inconsistent shapes in gate ") + gate);
}

// pre = W x + U h + b, then the gate nonlinearity
Vec gate_pre(const Matrix& w, const Matrix& u, const Vec& b, const Vec& x, const Vec& h) {
    Vec pre = matvec(w, x);
    const Vec rec = matvec(u, h);
    for (std::size_t j = 0; j < pre.size(); ++j) pre[j] += rec[j] + b[j];
    return pre;
}

}  // namespace

void LstmParameters::validate() const {
    check_gate(w_input, u_input, b_input, input_dim, hidden_dim, "i");
    check_gate(w_forget, u_forget, b_forget, input_dim, hidden_dim, "f");
    check_gate(w_output, u_output, b_output, input_dim, hidden_dim, "o");
    check_gate(w_cell, u_cell, b_cell, input_dim, hidden_dim, "c");
}

LstmParameters make_lstm(std::size_t input_dim, std::size_t hidden_dim) {
    LstmParameters p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.w_input = p.w_forget = p.w_output = p.w_cell = Matrix(hidden_dim, input_dim);
    p.u_input = p.u_forget = p.u_output = p.u_cell = Matrix(hidden_dim, hidden_dim);
    p.b_input = p.b_forget = p.b_output = p.b_cell = Vec(hidden_dim, 0.0);
    return p;
}

LstmState zero_state(std::size_t hidden_dim) {
    return {Vec(hidden_dim, 0.0), Vec(hidden_dim, 0.0)};
}

LstmState lstm_step(const LstmParameters& params, const LstmState& state, const Vec& x) {
    params.validate();
    if (x.size() != params.input_dim || state.h.size() != params.hidden_dim ||
        state.c.size() != params.hidden_dim)
        throw numeric_error("lstm_step: shape mismatch");

    const Vec i = sigmoid_vec(gate_pre(params.w_input, params.u_input, params.b_input, x, state.h));
    const Vec f =
        sigmoid_vec(gate_pre(params.w_forget, params.u_forget, params.b_forget, x, state.h));
    const Vec o =
        sigmoid_vec(gate_pre(params.w_output, params.u_output, params.b_output, x, state.h));
    const Vec g = tanh_vec(gate_pre(params.w_cell, params.u_cell, params.b_cell, x, state.h));

    LstmState next = zero_state(params.hidden_dim);
    for (std::size_t j = 0; j < params.hidden_dim; ++j) {
        next.c[j] = f[j] * state.c[j] + i[j] * g[j];
        next.h[j] = o[j] * std::tanh(next.c[j]);
    }
    return next;
}

LstmForward lstm_encode(const LstmParameters& params, const std::vector<Vec>& inputs) {
    params.validate();
    if (inputs.empty()) throw numeric_error("lstm_encode: empty input sequence");

    LstmForward fwd;
    fwd.steps.reserve(inputs.size());
    LstmState state = zero_state(params.hidden_dim);
    for (const Vec& x : inputs) {
        if (x.size() != params.input_dim) throw numeric_error("lstm_encode: input width mismatch");
        LstmStepCache step;
        step.x = x;
        step.h_prev = state.h;
        step.c_prev = state.c;
        step.gate_i =
            sigmoid_vec(gate_pre(params.w_input, params.u_input, params.b_input, x, state.h));
        step.gate_f =
            sigmoid_vec(gate_pre(params.w_forget, params.u_forget, params.b_forget, x, state.h));
        step.gate_o =
            sigmoid_vec(gate_pre(params.w_output, params.u_output, params.b_output, x, state.h));
        step.cell_cand =
            tanh_vec(gate_pre(params.w_cell, params.u_cell, params.b_cell, x, state.h));

        const std::size_t h_dim = params.hidden_dim;
        step.c = Vec(h_dim);
        step.tanh_c = Vec(h_dim);
        step.h = Vec(h_dim);
        for (std::size_t j = 0; j < h_dim; ++j) {
            step.c[j] = step.gate_f[j] * step.c_prev[j] + step.gate_i[j] * step.cell_cand[j];
            step.tanh_c[j] = std::tanh(step.c[j]);
            step.h[j] = step.gate_o[j] * step.tanh_c[j];
        }
        state.h = step.h;
        state.c = step.c;
        fwd.steps.push_back(std::move(step));
    }
    return fwd;
}

Vec lstm_encode_final(const LstmParameters& params, const std::vector<Vec>& inputs) {
    return lstm_encode(params, inputs).h_final();
}

LstmBackward lstm_encode_backward(const LstmParameters& params, const LstmForward& forward,
                                  const Vec& d_h_final) {
    params.validate();
    if (forward.steps.empty())
        throw numeric_error("lstm_encode_backward: missing cached activations");
    if (d_h_final.size() != params.hidden_dim)
        throw numeric_error("lstm_encode_backward: upstream gradient width mismatch");

    const std::size_t h_dim = params.hidden_dim;
    LstmBackward back;
    back.grads = make_lstm(params.input_dim, params.hidden_dim);
    back.d_inputs.assign(forward.steps.size(), Vec(params.input_dim, 0.0));

    Vec d_h = d_h_final;
    Vec d_c(h_dim, 0.0);
    for (std::size_t t = forward.steps.size(); t-- > 0;) {
        const LstmStepCache& s = forward.steps[t];

        Vec da_i(h_dim), da_f(h_dim), da_o(h_dim), da_g(h_dim);
        for (std::size_t j = 0; j < h_dim; ++j) {
            const double d_o = d_h[j] * s.tanh_c[j];
            const double d_cj = d_c[j] + d_h[j] * s.gate_o[j] * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
            const double d_i = d_cj * s.cell_cand[j];
            const double d_f = d_cj * s.c_prev[j];
            const double d_g = d_cj * s.gate_i[j];
            da_i[j] = d_i * s.gate_i[j] * (1.0 - s.gate_i[j]);
            da_f[j] = d_f * s.gate_f[j] * (1.0 - s.gate_f[j]);
            da_o[j] = d_o * s.gate_o[j] * (1.0 - s.gate_o[j]);
            da_g[j] = d_g * (1.0 - s.cell_cand[j] * s.cell_cand[j]);
            d_c[j] = d_cj * s.gate_f[j];  // flows to c_{t-1}
        }

        add_outer(back.grads.w_input, da_i, s.x);
        add_outer(back.grads.w_forget, da_f, s.x);
        add_outer(back.grads.w_output, da_o, s.x);
        add_outer(back.grads.w_cell, da_g, s.x);
        add_outer(back.grads.u_input, da_i, s.h_prev);
        add_outer(back.grads.u_forget, da_f, s.h_prev);
        add_outer(back.grads.u_output, da_o, s.h_prev);
        add_outer(back.grads.u_cell, da_g, s.h_prev);
        add_inplace(back.grads.b_input, da_i);
        add_inplace(back.grads.b_forget, da_f);
        add_inplace(back.grads.b_output, da_o);
        add_inplace(back.grads.b_cell, da_g);

        Vec& dx = back.d_inputs[t];
        add_inplace(dx, matvec_transpose(params.w_input, da_i));
        add_inplace(dx, matvec_transpose(params.w_forget, da_f));
        add_inplace(dx, matvec_transpose(params.w_output, da_o));
        add_inplace(dx, matvec_transpose(params.w_cell, da_g));

        d_h = matvec_transpose(params.u_input, da_i);
        add_inplace(d_h, matvec_transpose(params.u_forget, da_f));
        add_inplace(d_h, matvec_transpose(params.u_output, da_o));
        add_inplace(d_h, matvec_transpose(params.u_cell, da_g));
    }
    return back;
}

}  // namespace stsim
