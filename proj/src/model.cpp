#include "stsim/model.hpp"

#include <cmath>
#include <map>

namespace stsim {

SiameseModel init_model(const ModelHyperparams& hp) {
    if (hp.embedding_dim == 0 || hp.n_filters == 0 || hp.hidden_dim == 0)
        throw numeric_error("init_model: zero-sized dimension");
    if (hp.window == 0 || hp.window % 2 == 0)
        throw numeric_error("init_model: window must be odd and positive");

    SiameseModel model;
    model.hp = hp;
    model.bank = make_filter_bank(hp.window, hp.embedding_dim, hp.n_filters);
    model.lstm = make_lstm(hp.fused_dim(), hp.hidden_dim);

    // One stream fills all weight matrices in declared order; biases stay
    // zero except the forget gate.
    Rng rng(hp.seed);
    fill_gaussian(rng, model.bank.weights.data, kInitStddev);
    for (Matrix* m : {&model.lstm.w_input, &model.lstm.u_input, &model.lstm.w_forget,
                      &model.lstm.u_forget, &model.lstm.w_output, &model.lstm.u_output,
                      &model.lstm.w_cell, &model.lstm.u_cell})
        fill_gaussian(rng, m->data, kInitStddev);
    for (double& b : model.lstm.b_forget) b = kForgetBiasInit;
    return model;
}

std::vector<ParamView> param_views(ContextFilterBank& bank, LstmParameters& lstm) {
    return {
        {"cnn.w", bank.weights.data},
        {"cnn.b", bank.bias},
        {"lstm.w_i", lstm.w_input.data},
        {"lstm.u_i", lstm.u_input.data},
        {"lstm.b_i", lstm.b_input},
        {"lstm.w_f", lstm.w_forget.data},
        {"lstm.u_f", lstm.u_forget.data},
        {"lstm.b_f", lstm.b_forget},
        {"lstm.w_o", lstm.w_output.data},
        {"lstm.u_o", lstm.u_output.data},
        {"lstm.b_o", lstm.b_output},
        {"lstm.w_c", lstm.w_cell.data},
        {"lstm.u_c", lstm.u_cell.data},
        {"lstm.b_c", lstm.b_cell},
    };
}

std::vector<ParamView> param_views(SiameseModel& model) {
    return param_views(model.bank, model.lstm);
}

BranchForward encode_branch(const SiameseModel& model, const std::vector<std::string>& tokens,
                            const EmbeddingTable& table) {
    if (tokens.empty()) throw data_error("encode_branch: empty sentence");
    if (table.dim != model.hp.embedding_dim)
        throw data_error("embedding width " + std::to_string(table.dim) +
                         " does not match the model's " +
                         std::to_string(model.hp.embedding_dim));

    BranchForward fwd;
    fwd.embedded.reserve(tokens.size());
    for (const std::string& t : tokens) fwd.embedded.push_back(table.lookup(t));
    fwd.cnn = local_contexts(fwd.embedded, model.bank);
    fwd.fused.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i)
        fwd.fused.push_back(concat(fwd.embedded[i], fwd.cnn.outputs[i]));
    fwd.lstm = lstm_encode(model.lstm, fwd.fused);
    return fwd;
}

double score_raw(const SiameseModel& model, const std::vector<std::string>& tokens_a,
                 const std::vector<std::string>& tokens_b, const EmbeddingTable& table) {
    const BranchForward a = encode_branch(model, tokens_a, table);
    const BranchForward b = encode_branch(model, tokens_b, table);
    return std::exp(-l1_distance(a.lstm.h_final(), b.lstm.h_final()));
}

namespace {

struct BranchBackward {
    LstmParameters lstm;
    CnnGrads cnn;
    std::vector<Vec> d_we_direct;  // gradient on we_i through the fused input
};

BranchBackward backward_branch(const SiameseModel& model, const BranchForward& fwd,
                               const Vec& d_h) {
    BranchBackward back;
    const LstmBackward lstm_back = lstm_encode_backward(model.lstm, fwd.lstm, d_h);
    back.lstm = lstm_back.grads;

    const std::size_t k = model.hp.embedding_dim;
    const std::size_t d = model.hp.n_filters;
    std::vector<Vec> d_lc(fwd.fused.size(), Vec(d, 0.0));
    back.d_we_direct.assign(fwd.fused.size(), Vec(k, 0.0));
    for (std::size_t t = 0; t < fwd.fused.size(); ++t) {
        const Vec& dx = lstm_back.d_inputs[t];
        for (std::size_t c = 0; c < k; ++c) back.d_we_direct[t][c] = dx[c];
        for (std::size_t c = 0; c < d; ++c) d_lc[t][c] = dx[k + c];
    }
    back.cnn = local_contexts_backward(d_lc, fwd.cnn, model.bank);
    return back;
}

void accumulate_lstm(LstmParameters& acc, const LstmParameters& g) {
    add_inplace(acc.w_input.data, g.w_input.data);
    add_inplace(acc.u_input.data, g.u_input.data);
    add_inplace(acc.b_input, g.b_input);
    add_inplace(acc.w_forget.data, g.w_forget.data);
    add_inplace(acc.u_forget.data, g.u_forget.data);
    add_inplace(acc.b_forget, g.b_forget);
    add_inplace(acc.w_output.data, g.w_output.data);
    add_inplace(acc.u_output.data, g.u_output.data);
    add_inplace(acc.b_output, g.b_output);
    add_inplace(acc.w_cell.data, g.w_cell.data);
    add_inplace(acc.u_cell.data, g.u_cell.data);
    add_inplace(acc.b_cell, g.b_cell);
}

void collect_token_grads(std::map<std::string, Vec>& into,
                         const std::vector<std::string>& tokens, const BranchBackward& back) {
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        Vec g = back.d_we_direct[t];
        add_inplace(g, back.cnn.d_inputs[t]);
        auto [it, fresh] = into.try_emplace(tokens[t], std::move(g));
        if (!fresh) add_inplace(it->second, g);
    }
}

}  // namespace

PairLossResult pair_loss(const SiameseModel& model, const SentencePair& pair,
                         const EmbeddingTable& table, bool want_embedding_grads) {
    const BranchForward fa = encode_branch(model, pair.tokens_a, table);
    const BranchForward fb = encode_branch(model, pair.tokens_b, table);
    const Vec& ha = fa.lstm.h_final();
    const Vec& hb = fb.lstm.h_final();

    const double dist = l1_distance(ha, hb);
    const double score = std::exp(-dist);
    const double target = normalized_target(pair.gold);
    const double diff = score - target;

    PairLossResult result;
    result.loss = diff * diff;
    result.score = score;

    // d loss / d dist, through exp(-dist)
    const double d_dist = 2.0 * diff * (-score);
    Vec d_ha(ha.size(), 0.0), d_hb(hb.size(), 0.0);
    for (std::size_t j = 0; j < ha.size(); ++j) {
        // subgradient of |x| at 0 is taken as 0
        const double s = ha[j] > hb[j] ? 1.0 : (ha[j] < hb[j] ? -1.0 : 0.0);
        d_ha[j] = d_dist * s;
        d_hb[j] = -d_dist * s;
    }

    const BranchBackward ba = backward_branch(model, fa, d_ha);
    const BranchBackward bb = backward_branch(model, fb, d_hb);

    result.grads.bank = make_filter_bank(model.hp.window, model.hp.embedding_dim,
                                         model.hp.n_filters);
    result.grads.lstm = make_lstm(model.hp.fused_dim(), model.hp.hidden_dim);
    add_inplace(result.grads.bank.weights.data, ba.cnn.d_weights.data);
    add_inplace(result.grads.bank.weights.data, bb.cnn.d_weights.data);
    add_inplace(result.grads.bank.bias, ba.cnn.d_bias);
    add_inplace(result.grads.bank.bias, bb.cnn.d_bias);
    accumulate_lstm(result.grads.lstm, ba.lstm);
    accumulate_lstm(result.grads.lstm, bb.lstm);

    if (want_embedding_grads) {
        std::map<std::string, Vec> by_token;
        collect_token_grads(by_token, pair.tokens_a, ba);
        collect_token_grads(by_token, pair.tokens_b, bb);
        result.grads.embeddings.reserve(by_token.size());
        for (auto& [token, grad] : by_token)
            result.grads.embeddings.push_back({token, std::move(grad)});
    }
    return result;
}

}  // namespace stsim
