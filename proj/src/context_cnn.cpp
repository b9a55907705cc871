#include "stsim/context_cnn.hpp"

#include <cmath>

namespace stsim {

void ContextFilterBank::validate() const {
    if (window == 0 || window % 2 == 0)
        throw numeric_error("filter bank: window must be odd and positive");
    if (weights.rows != n_filters || weights.cols != window * in_dim ||
        bias.size() != n_filters)
        throw numeric_error("filter bank: inconsistent shapes");
}

ContextFilterBank make_filter_bank(std::size_t window, std::size_t in_dim,
                                   std::size_t n_filters) {
    ContextFilterBank bank;
    bank.window = window;
    bank.in_dim = in_dim;
    bank.n_filters = n_filters;
    bank.weights = Matrix(n_filters, window * in_dim);
    bank.bias = Vec(n_filters, 0.0);
    bank.validate();
    return bank;
}

Vec window_concat(const std::vector<Vec>& embedded, std::size_t i, std::size_t window) {
    if (window == 0 || window % 2 == 0)
        throw numeric_error("window_concat: window must be odd and positive");
    if (i >= embedded.size()) throw numeric_error("window_concat: position out of range");
    const std::size_t k = embedded.empty() ? 0 : embedded[0].size();
    const long half = static_cast<long>(window / 2);
    Vec out(window * k, 0.0);
    for (long off = -half; off <= half; ++off) {
        const long src = static_cast<long>(i) + off;
        if (src < 0 || src >= static_cast<long>(embedded.size())) continue;
        const Vec& x = embedded[static_cast<std::size_t>(src)];
        if (x.size() != k) throw numeric_error("window_concat: ragged embedding widths");
        const std::size_t dst = static_cast<std::size_t>(off + half) * k;
        for (std::size_t c = 0; c < k; ++c) out[dst + c] = x[c];
    }
    return out;
}

CnnForward local_contexts(const std::vector<Vec>& embedded, const ContextFilterBank& bank) {
    bank.validate();
    for (const Vec& x : embedded)
        if (x.size() != bank.in_dim)
            throw numeric_error("local_contexts: embedding width " + std::to_string(x.size()) +
                                " does not match filter bank in_dim " +
                                std::to_string(bank.in_dim));
    CnnForward fwd;
    fwd.windows.reserve(embedded.size());
    fwd.outputs.reserve(embedded.size());
    for (std::size_t i = 0; i < embedded.size(); ++i) {
        Vec xl = window_concat(embedded, i, bank.window);
        Vec pre = matvec(bank.weights, xl);
        for (std::size_t j = 0; j < pre.size(); ++j) pre[j] = std::tanh(pre[j] + bank.bias[j]);
        fwd.windows.push_back(std::move(xl));
        fwd.outputs.push_back(std::move(pre));
    }
    return fwd;
}

CnnGrads local_contexts_backward(const std::vector<Vec>& upstream, const CnnForward& forward,
                                 const ContextFilterBank& bank) {
    bank.validate();
    const std::size_t n = forward.outputs.size();
    if (forward.windows.size() != n)
        throw numeric_error("local_contexts_backward: missing cached forward state");
    if (upstream.size() != n)
        throw numeric_error("local_contexts_backward: upstream length mismatch");

    const std::size_t k = bank.in_dim;
    const long half = static_cast<long>(bank.window / 2);
    CnnGrads grads;
    grads.d_weights = Matrix(bank.n_filters, bank.window * k);
    grads.d_bias = Vec(bank.n_filters, 0.0);
    grads.d_inputs.assign(n, Vec(k, 0.0));

    for (std::size_t i = 0; i < n; ++i) {
        const Vec& lc = forward.outputs[i];
        if (upstream[i].size() != bank.n_filters)
            throw numeric_error("local_contexts_backward: upstream width mismatch");
        // d(pre-activation) through tanh
        Vec d_pre(bank.n_filters);
        for (std::size_t j = 0; j < bank.n_filters; ++j)
            d_pre[j] = upstream[i][j] * (1.0 - lc[j] * lc[j]);

        add_outer(grads.d_weights, d_pre, forward.windows[i]);
        add_inplace(grads.d_bias, d_pre);

        const Vec d_window = matvec_transpose(bank.weights, d_pre);
        for (long off = -half; off <= half; ++off) {
            const long src = static_cast<long>(i) + off;
            if (src < 0 || src >= static_cast<long>(n)) continue;
            Vec& slot = grads.d_inputs[static_cast<std::size_t>(src)];
            const std::size_t base = static_cast<std::size_t>(off + half) * k;
            for (std::size_t c = 0; c < k; ++c) slot[c] += d_window[base + c];
        }
    }
    return grads;
}

}  // namespace stsim
