#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stsim/calibration.hpp"
#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/kernel.hpp"
#include "stsim/model.hpp"
#include "stsim/train.hpp"

namespace stsim {

/// 1 - (u.v)/(|u||v|), in [0,2]. Zero-norm inputs are an error.
double cosine_distance(const Vec& u, const Vec& v);

/// Pairwise distance grid between the tokens of two sentences, labels in
/// token order. Cells whose vectors have zero norm are marked invalid
/// instead of failing the whole matrix.
struct DistanceMatrix {
    std::vector<std::string> row_labels;  // tokens of sentence A
    std::vector<std::string> col_labels;  // tokens of sentence B
    Matrix values;
    std::vector<std::uint8_t> valid;  // parallels values.data

    bool cell_valid(std::size_t r, std::size_t c) const { return valid[r * values.cols + c] != 0; }
};

/// Cosine distances between the general word embeddings of the two sentences.
DistanceMatrix word_distance_matrix(const std::vector<std::string>& tokens_a,
                                    const std::vector<std::string>& tokens_b,
                                    const EmbeddingTable& table);

/// Cosine distances between the local contexts the model's trained filter
/// bank produces for the two sentences.
DistanceMatrix context_distance_matrix(const std::vector<std::string>& tokens_a,
                                       const std::vector<std::string>& tokens_b,
                                       const SiameseModel& model, const EmbeddingTable& table);

std::string format_matrix_csv(const DistanceMatrix& m);
/// Human-oriented aligned grid, two decimals per cell.
std::string format_matrix_text(const DistanceMatrix& m);

struct ScoredPair {
    std::string sentence_a;
    std::string sentence_b;
    std::optional<double> gold;
    double raw = 0.0;
    double calibrated = 0.0;
};

/// Reads a pairs TSV (sentence A, sentence B, optional gold column) and
/// scores every row. An empty file yields an empty table.
std::vector<ScoredPair> score_pairs(const SiameseModel& model,
                                    const CalibrationModel& calibration,
                                    const std::string& pairs_path, const EmbeddingTable& table);

std::string format_pairs_csv(const std::vector<ScoredPair>& rows);
std::string format_pairs_text(const std::vector<ScoredPair>& rows);

struct AblationRow {
    std::size_t window = 0;
    bool ok = false;
    double pearson = 0.0;
    double spearman = 0.0;
    double mse = 0.0;
    std::string error;
};

struct AblationConfig {
    ModelHyperparams hp;      // window is overridden per run
    TrainConfig train;
    double bandwidth = 0.25;  // calibration bandwidth, fit on validation
};

/// Trains one model per window length under identical seeds and data, then
/// evaluates on the test split. Failures are recorded per row; completed
/// rows survive.
std::vector<AblationRow> run_ablation(const std::vector<std::size_t>& windows,
                                      const DatasetSplit& data, const EmbeddingTable& table,
                                      const AblationConfig& config);

std::string format_ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace stsim
