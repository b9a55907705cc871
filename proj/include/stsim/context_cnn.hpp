#pragma once

#include <vector>

#include "stsim/kernel.hpp"

namespace stsim {

/// Filter bank producing one local-context vector per word position. Each of
/// the n_filters rows of `weights` is one filter over a window of `window`
/// consecutive word embeddings.
struct ContextFilterBank {
    std::size_t window = 5;     // l, odd so windows are centered
    std::size_t in_dim = 0;     // k, embedding width
    std::size_t n_filters = 0;  // d, local-context width
    Matrix weights;             // d x (l*k)
    Vec bias;                   // d

    void validate() const;
};

ContextFilterBank make_filter_bank(std::size_t window, std::size_t in_dim,
                                   std::size_t n_filters);

/// Concatenated window centered on position i (0-based); positions outside
/// the sentence contribute zero padding, so the result is always l*k wide.
Vec window_concat(const std::vector<Vec>& embedded, std::size_t i, std::size_t window);

struct CnnForward {
    std::vector<Vec> windows;  // n x (l*k), cached for the backward pass
    std::vector<Vec> outputs;  // n x d, lc_i = tanh(W xl_i + b)
};

/// lc_i = tanh(W * window(i) + b) for every position; output length equals
/// the sentence length ("same" padding).
CnnForward local_contexts(const std::vector<Vec>& embedded, const ContextFilterBank& bank);

struct CnnGrads {
    Matrix d_weights;          // d x (l*k)
    Vec d_bias;                // d
    std::vector<Vec> d_inputs; // n x k, per-position embedding gradients
};

/// Exact gradients of the filter response. Embedding gradients accumulate
/// the contribution of every window covering the position; padding gets none.
CnnGrads local_contexts_backward(const std::vector<Vec>& upstream, const CnnForward& forward,
                                 const ContextFilterBank& bank);

}  // namespace stsim
