#include "stsim/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "stsim/metrics.hpp"

namespace stsim {

namespace {

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

}  // namespace

EvaluationResult evaluate(const SiameseModel& model, const std::vector<SentencePair>& split,
                          const EmbeddingTable& table,
                          const std::optional<CalibrationModel>& calibration,
                          std::size_t threads) {
    if (split.empty()) throw data_error("evaluate: empty split");

    std::vector<const SentencePair*> ordered;
    ordered.reserve(split.size());
    for (const SentencePair& p : split) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(),
              [](const SentencePair* a, const SentencePair* b) { return a->id < b->id; });

    const CalibrationModel calib =
        calibration ? *calibration : CalibrationModel::affine();

    EvaluationResult result;
    result.pairs.resize(ordered.size());
    parallel_for(ordered.size(), threads, [&](std::size_t i) {
        const SentencePair& p = *ordered[i];
        PairScore score;
        score.id = p.id;
        score.raw = score_raw(model, p.tokens_a, p.tokens_b, table);
        score.calibrated = calib.apply(score.raw);
        score.gold = p.gold;
        result.pairs[i] = std::move(score);
    });

    std::vector<double> raw(result.pairs.size()), calibrated(result.pairs.size()),
        gold(result.pairs.size());
    for (std::size_t i = 0; i < result.pairs.size(); ++i) {
        raw[i] = result.pairs[i].raw;
        calibrated[i] = result.pairs[i].calibrated;
        gold[i] = result.pairs[i].gold;
    }
    result.report.n = result.pairs.size();
    result.report.pearson = pearson(raw, gold);
    result.report.spearman = spearman(raw, gold);
    result.report.mse = mse(calibrated, gold);
    return result;
}

void write_report_csv(const EvaluationResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write report '" + path + "'");
    char buf[160];
    out << "metric,value\n";
    std::snprintf(buf, sizeof(buf), "pearson,%.17g\nspearman,%.17g\nmse,%.17g\nn,%zu\n",
                  result.report.pearson, result.report.spearman, result.report.mse,
                  result.report.n);
    out << buf;
    out << "id,raw,calibrated,gold\n";
    for (const PairScore& p : result.pairs) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", p.id.c_str(), p.raw,
                      p.calibrated, p.gold);
        out << buf;
    }
    if (!out) throw data_error("write failed for '" + path + "'");
}

}  // namespace stsim
