#include "stsim/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "stsim/metrics.hpp"

namespace stsim {

namespace {

// Deterministic Fisher-Yates driven by the trainer's own stream.
void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

void add_span(std::span<double> acc, std::span<const double> x) {
    if (acc.size() != x.size()) throw numeric_error("train: gradient shape mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += x[i];
}

// Runs fn(i) for i in [0, count); results land in caller-owned slots so the
// later reduction is in fixed index order regardless of the thread count.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t n_workers = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += n_workers) fn(i);
        });
    for (std::thread& t : pool) t.join();
}

struct ValStats {
    double mse = std::numeric_limits<double>::quiet_NaN();
    double pearson = std::numeric_limits<double>::quiet_NaN();
};

ValStats validation_stats(const SiameseModel& model, const std::vector<SentencePair>& pairs,
                          const EmbeddingTable& table, std::size_t threads) {
    ValStats stats;
    if (pairs.empty()) return stats;
    std::vector<double> raw(pairs.size()), gold(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        raw[i] = score_raw(model, pairs[i].tokens_a, pairs[i].tokens_b, table);
        gold[i] = pairs[i].gold;
    });
    double acc = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double diff = raw[i] - normalized_target(gold[i]);
        acc += diff * diff;
    }
    stats.mse = acc / static_cast<double>(pairs.size());
    if (pairs.size() >= 2) {
        try {
            stats.pearson = pearson(raw, gold);
        } catch (const numeric_error&) {
            // constant series, typically before training has moved anything
        }
    }
    return stats;
}

}  // namespace

TrainResult train(const SiameseModel& initial, const DatasetSplit& data,
                  const EmbeddingTable& table, const TrainConfig& config) {
    if (data.train.empty()) throw data_error("train: empty training split");
    if (config.epochs == 0 || config.batch_size == 0)
        throw usage_error("train: epochs and batch size must be positive");
    if (config.clip_norm && !(*config.clip_norm > 0.0))
        throw usage_error("train: clip threshold must be positive");

    SiameseModel model = initial;
    EmbeddingTable tuned;
    if (config.train_embeddings) tuned = table;
    const EmbeddingTable& active_table = config.train_embeddings ? tuned : table;

    const AdadeltaConfig opt{config.rho, config.epsilon, config.lr_scale};
    const std::vector<ParamView> views = param_views(model);
    std::vector<AdadeltaState> opt_state;
    opt_state.reserve(views.size());
    for (const ParamView& v : views) opt_state.emplace_back(v.values.size());
    std::map<std::size_t, AdadeltaState> embedding_state;  // lazily, per touched slot

    Rng shuffle_rng(config.seed);
    std::vector<std::size_t> order(data.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    TrainResult result;
    result.model = model;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_indices(order, shuffle_rng);
        double epoch_loss = 0.0;

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, order.size() - start);
            std::vector<PairLossResult> per_pair(count);
            parallel_for(count, config.threads, [&](std::size_t i) {
                per_pair[i] = pair_loss(model, data.train[order[start + i]], active_table,
                                        config.train_embeddings);
            });

            ContextFilterBank bank_grad =
                make_filter_bank(model.hp.window, model.hp.embedding_dim, model.hp.n_filters);
            LstmParameters lstm_grad = make_lstm(model.hp.fused_dim(), model.hp.hidden_dim);
            const std::vector<ParamView> grad_views = param_views(bank_grad, lstm_grad);
            std::map<std::string, Vec> embedding_grads;  // ordered: fixed reduction order

            for (std::size_t i = 0; i < count; ++i) {
                const SentencePair& pair = data.train[order[start + i]];
                if (!std::isfinite(per_pair[i].loss))
                    throw numeric_error("train: non-finite loss at pair id '" + pair.id + "'");
                epoch_loss += per_pair[i].loss;
                const std::vector<ParamView> g =
                    param_views(per_pair[i].grads.bank, per_pair[i].grads.lstm);
                for (std::size_t v = 0; v < grad_views.size(); ++v)
                    add_span(grad_views[v].values, g[v].values);
                for (const TokenGrad& tg : per_pair[i].grads.embeddings) {
                    auto [it, fresh] = embedding_grads.try_emplace(tg.token, tg.grad);
                    if (!fresh) add_inplace(it->second, tg.grad);
                }
            }

            const double inv_count = 1.0 / static_cast<double>(count);
            for (const ParamView& v : grad_views)
                for (double& x : v.values) x *= inv_count;
            for (auto& [token, g] : embedding_grads)
                for (double& x : g) x *= inv_count;

            if (config.clip_norm) {
                double sq = 0.0;
                for (const ParamView& v : grad_views)
                    for (double x : v.values) sq += x * x;
                for (const auto& [token, g] : embedding_grads)
                    for (double x : g) sq += x * x;
                const double norm = std::sqrt(sq);
                if (norm > *config.clip_norm) {
                    const double scale = *config.clip_norm / norm;
                    for (const ParamView& v : grad_views)
                        for (double& x : v.values) x *= scale;
                    for (auto& [token, g] : embedding_grads)
                        for (double& x : g) x *= scale;
                }
            }

            for (std::size_t v = 0; v < views.size(); ++v) {
                require_finite(grad_views[v].values, "train: batch gradient " + views[v].name);
                adadelta_step(views[v].values, grad_views[v].values, opt_state[v], opt);
            }
            if (config.train_embeddings) {
                for (auto& [token, g] : embedding_grads) {
                    const auto slot = tuned.find_index(token);
                    if (!slot) continue;  // OOV vectors are synthetic, nothing to update
                    auto [it, fresh] = embedding_state.try_emplace(*slot, tuned.dim);
                    adadelta_step(tuned.vectors[*slot], g, it->second, opt);
                }
            }
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_mse = epoch_loss / static_cast<double>(data.train.size());
        const ValStats val = validation_stats(model, data.validation, active_table, config.threads);
        stats.val_mse = val.mse;
        stats.val_pearson = val.pearson;
        result.log.push_back(stats);

        const bool improved = !data.validation.empty() && std::isfinite(val.mse)
                                  ? val.mse < best_val
                                  : true;  // without validation, the last epoch wins
        if (improved) {
            best_val = val.mse;
            best_epoch = epoch;
            result.model = model;
            if (config.train_embeddings) result.tuned_embeddings = tuned;
        }
        if (config.patience && !data.validation.empty() && epoch - best_epoch >= *config.patience)
            break;
    }
    return result;
}

void write_epoch_log_csv(const std::vector<EpochStats>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write epoch log '" + path + "'");
    out << "epoch,train_mse,val_mse,val_pearson\n";
    char buf[128];
    for (const EpochStats& e : log) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", e.epoch, e.train_mse,
                      e.val_mse, e.val_pearson);
        out << buf;
    }
    if (!out) throw data_error("write failed for '" + path + "'");
}

}  // namespace stsim
