#pragma once

#include <string>
#include <vector>

#include "stsim/context_cnn.hpp"
#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/kernel.hpp"
#include "stsim/lstm.hpp"

namespace stsim {

struct ModelHyperparams {
    std::size_t embedding_dim = 300;  // k
    std::size_t n_filters = 300;      // d
    std::size_t window = 5;           // l
    std::size_t hidden_dim = 50;      // H
    std::uint64_t seed = 0;
    std::string embedding_id;

    std::size_t fused_dim() const { return embedding_dim + n_filters; }
};

/// The pair-scoring model. One filter bank and one LSTM serve both branches;
/// there are no per-branch copies anywhere.
struct SiameseModel {
    ModelHyperparams hp;
    ContextFilterBank bank;
    LstmParameters lstm;
};

inline constexpr double kInitStddev = 0.05;
inline constexpr double kForgetBiasInit = 2.5;

/// Fresh model: weights N(0, 0.05^2) from the seed, biases zero except the
/// forget-gate bias at 2.5.
SiameseModel init_model(const ModelHyperparams& hp);

/// All trainable arrays in the fixed declared order
/// W, b, W_i, U_i, b_i, W_f, U_f, b_f, W_o, U_o, b_o, W_c, U_c, b_c.
std::vector<ParamView> param_views(ContextFilterBank& bank, LstmParameters& lstm);
std::vector<ParamView> param_views(SiameseModel& model);

struct BranchForward {
    std::vector<Vec> embedded;  // we_i
    CnnForward cnn;             // lc_i and cached windows
    std::vector<Vec> fused;     // we_i (+) lc_i
    LstmForward lstm;
};

BranchForward encode_branch(const SiameseModel& model, const std::vector<std::string>& tokens,
                            const EmbeddingTable& table);

/// exp(-L1(h_n^A, h_n^B)) in (0, 1]; exactly 1 for identical token sequences
/// and bitwise symmetric in its two sentences.
double score_raw(const SiameseModel& model, const std::vector<std::string>& tokens_a,
                 const std::vector<std::string>& tokens_b, const EmbeddingTable& table);

/// Per-token embedding gradient, aggregated over both branches and every
/// position the token occupies.
struct TokenGrad {
    std::string token;
    Vec grad;
};

struct PairGradients {
    ContextFilterBank bank;  // holds d_weights / d_bias
    LstmParameters lstm;     // holds the gate gradients
    std::vector<TokenGrad> embeddings;
};

struct PairLossResult {
    double loss = 0.0;
    double score = 0.0;
    PairGradients grads;
};

/// Squared error of the raw score against the normalized gold target, with
/// exact gradients for every shared parameter (branch contributions summed).
/// The L1 subgradient at exact coordinate ties is 0. Embedding gradients are
/// only collected when requested.
PairLossResult pair_loss(const SiameseModel& model, const SentencePair& pair,
                         const EmbeddingTable& table, bool want_embedding_grads = false);

}  // namespace stsim
