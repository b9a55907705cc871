#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stsim/calibration.hpp"
#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/model.hpp"

namespace stsim {

struct EvaluationReport {
    double pearson = 0.0;
    double spearman = 0.0;
    double mse = 0.0;
    std::size_t n = 0;
};

struct PairScore {
    std::string id;
    double raw = 0.0;
    double calibrated = 0.0;
    double gold = 0.0;
};

struct EvaluationResult {
    EvaluationReport report;
    std::vector<PairScore> pairs;
};

/// Scores every pair and reports Pearson/Spearman on the raw similarities and
/// MSE on the calibrated [1,5] predictions. Pairs are processed in id order,
/// so the result does not depend on the input ordering. Without a fitted
/// calibration the affine map 4*raw + 1 is applied.
EvaluationResult evaluate(const SiameseModel& model, const std::vector<SentencePair>& split,
                          const EmbeddingTable& table,
                          const std::optional<CalibrationModel>& calibration = std::nullopt,
                          std::size_t threads = 1);

void write_report_csv(const EvaluationResult& result, const std::string& path);

}  // namespace stsim
