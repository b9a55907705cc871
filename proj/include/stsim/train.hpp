#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stsim/adadelta.hpp"
#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/model.hpp"

namespace stsim {

struct TrainConfig {
    std::size_t epochs = 10;
    std::size_t batch_size = 32;
    double lr_scale = 0.01;
    double rho = 0.95;
    double epsilon = 1e-6;
    std::uint64_t seed = 0;                // drives the per-epoch shuffle
    std::optional<double> clip_norm;       // global-norm gradient clip, off by default
    std::optional<std::size_t> patience;   // early stopping on validation MSE
    bool train_embeddings = false;         // fine-tune a private copy of the table
    std::size_t threads = 1;               // per-pair gradients in parallel
};

struct EpochStats {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;      // NaN when there is no validation split
    double val_pearson = 0.0;  // NaN when undefined (constant series)
};

struct TrainResult {
    SiameseModel model;  // parameters of the best validation epoch
    std::vector<EpochStats> log;
    // Fine-tuned copy of the table, present only with train_embeddings; the
    // input table itself is never touched.
    std::optional<EmbeddingTable> tuned_embeddings;
};

/// Minibatch MSE training with Adadelta. Deterministic for a fixed seed:
/// shuffling is seeded and gradient reduction is in fixed pair order, so the
/// thread count does not change results.
TrainResult train(const SiameseModel& initial, const DatasetSplit& data,
                  const EmbeddingTable& table, const TrainConfig& config);

void write_epoch_log_csv(const std::vector<EpochStats>& log, const std::string& path);

}  // namespace stsim
