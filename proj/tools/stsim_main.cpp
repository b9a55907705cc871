// Command-line front end: training, evaluation, pair scoring and the
// word/context distance diagnostics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stsim/analysis.hpp"
#include "stsim/checkpoint.hpp"
#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/evaluate.hpp"
#include "stsim/metrics.hpp"
#include "stsim/model.hpp"
#include "stsim/train.hpp"

namespace {

using namespace stsim;

struct EmbeddingOptions {
    std::string path;
    std::string format = "auto";  // auto | text | binary
    std::string oov = "hashed";   // hashed | zero
    std::uint64_t oov_seed = 0;
};

struct DataOptions {
    std::string path;
    std::string partition = "auto";  // auto | file | firstn
    std::string firstn = "4927,2000,3000";
};

void add_embedding_options(CLI::App* cmd, EmbeddingOptions& opts) {
    cmd->add_option("--embeddings", opts.path, "word embeddings file")->required();
    cmd->add_option("--embeddings-format", opts.format, "embeddings file format")
        ->check(CLI::IsMember({"auto", "text", "binary"}));
    cmd->add_option("--oov", opts.oov, "out-of-vocabulary policy")
        ->check(CLI::IsMember({"hashed", "zero"}));
    cmd->add_option("--oov-seed", opts.oov_seed, "seed for hashed OOV vectors");
}

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("--data", opts.path, "pair dataset (SICK-style TSV)")->required();
    cmd->add_option("--partition", opts.partition,
                    "split strategy: the file's own split column or first-n slicing")
        ->check(CLI::IsMember({"auto", "file", "firstn"}));
    cmd->add_option("--firstn-counts", opts.firstn,
                    "train,validation,test sizes for --partition firstn");
}

EmbeddingTable load_table(const EmbeddingOptions& opts) {
    EmbeddingTable table;
    if (opts.format == "text")
        table = load_embeddings_text(opts.path);
    else if (opts.format == "binary")
        table = load_embeddings_binary(opts.path);
    else
        table = load_embeddings_auto(opts.path);
    table.oov_policy = opts.oov == "zero" ? OovPolicy::ZeroVector : OovPolicy::HashedGaussian;
    table.oov_seed = opts.oov_seed;
    return table;
}

FirstNCounts parse_firstn(const std::string& spec) {
    FirstNCounts counts;
    if (std::sscanf(spec.c_str(), "%zu,%zu,%zu", &counts.train, &counts.validation,
                    &counts.test) != 3)
        throw usage_error("--firstn-counts expects three comma-separated sizes, got '" + spec +
                          "'");
    return counts;
}

DatasetSplit load_split(const DataOptions& opts) {
    const std::vector<TaggedPair> records = load_sick(opts.path);
    if (opts.partition == "file") return partition_by_file(records);
    if (opts.partition == "firstn") return partition_first_n(records, parse_firstn(opts.firstn));
    bool any_tag = false;
    for (const auto& r : records)
        if (r.tag != SplitTag::Unassigned) any_tag = true;
    return any_tag ? partition_by_file(records)
                   : partition_first_n(records, parse_firstn(opts.firstn));
}

std::vector<std::size_t> parse_windows(const std::string& spec) {
    std::vector<std::size_t> windows;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string field =
            spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!field.empty()) {
            char* end = nullptr;
            const unsigned long v = std::strtoul(field.c_str(), &end, 10);
            if (end != field.c_str() + field.size() || v == 0 || v % 2 == 0)
                throw usage_error("--windows entries must be odd positive integers, got '" +
                                  field + "'");
            windows.push_back(v);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (windows.empty()) throw usage_error("--windows is empty");
    return windows;
}

const std::vector<SentencePair>& pick_subset(const DatasetSplit& split,
                                             const std::string& name) {
    if (name == "train") return split.train;
    if (name == "validation") return split.validation;
    if (name == "test") return split.test;
    throw usage_error("unknown split '" + name + "'");
}

CalibrationModel fit_on_validation(const SiameseModel& model, const DatasetSplit& split,
                                   const EmbeddingTable& table, double bandwidth,
                                   std::size_t threads) {
    if (split.validation.empty())
        throw data_error("calibration needs a non-empty validation split");
    const EvaluationResult val = evaluate(model, split.validation, table, std::nullopt, threads);
    std::vector<double> raw, gold;
    raw.reserve(val.pairs.size());
    gold.reserve(val.pairs.size());
    for (const PairScore& p : val.pairs) {
        raw.push_back(p.raw);
        gold.push_back(p.gold);
    }
    return fit_calibration(raw, gold, bandwidth);
}

void write_text_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw data_error("cannot write '" + out_path + "'");
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"Siamese CNN+LSTM sentence-similarity toolkit"};
    app.require_subcommand(1);

    // ---- train ----------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "train a model and save a checkpoint");
    EmbeddingOptions train_emb;
    DataOptions train_data;
    add_embedding_options(train_cmd, train_emb);
    add_data_options(train_cmd, train_data);
    std::size_t window = 5, filters = 300, hidden = 50;
    std::uint64_t seed = 0;
    TrainConfig train_cfg;
    std::string out_model = "model.csim", log_path, out_embeddings;
    bool train_embeddings = false, deterministic = false;
    double clip = 0.0;
    std::size_t patience = 0;
    train_cmd->add_option("--window", window, "local-context window length (odd)");
    train_cmd->add_option("--filters", filters, "number of convolution filters");
    train_cmd->add_option("--hidden", hidden, "LSTM hidden width");
    train_cmd->add_option("--epochs", train_cfg.epochs, "training epochs");
    train_cmd->add_option("--batch", train_cfg.batch_size, "minibatch size");
    train_cmd->add_option("--lr-scale", train_cfg.lr_scale, "Adadelta step multiplier");
    train_cmd->add_option("--rho", train_cfg.rho, "Adadelta decay");
    train_cmd->add_option("--epsilon", train_cfg.epsilon, "Adadelta epsilon");
    train_cmd->add_option("--clip", clip, "global-norm gradient clip (0 disables)");
    train_cmd->add_option("--patience", patience, "early-stopping patience (0 disables)");
    train_cmd->add_option("--seed", seed, "seed for init and shuffling");
    train_cmd->add_option("--threads", train_cfg.threads, "worker threads per batch");
    train_cmd->add_flag("--deterministic", deterministic,
                        "force single-threaded execution (results are identical either way)");
    train_cmd->add_flag("--train-embeddings", train_embeddings,
                        "fine-tune a private copy of the embedding table");
    train_cmd->add_option("--out-embeddings", out_embeddings,
                          "where to save the fine-tuned embeddings (text format)");
    train_cmd->add_option("--out", out_model, "checkpoint output path");
    train_cmd->add_option("--log", log_path, "epoch log CSV path");

    // ---- evaluate -------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("evaluate", "score a split and report metrics");
    EmbeddingOptions eval_emb;
    DataOptions eval_data;
    add_embedding_options(eval_cmd, eval_emb);
    add_data_options(eval_cmd, eval_data);
    std::string eval_model_path, eval_split = "test", report_path = "report.csv";
    std::string eval_calibration_path;
    double eval_bandwidth = 0.25;
    std::size_t eval_threads = 1;
    bool eval_affine = false;
    eval_cmd->add_option("--model", eval_model_path, "checkpoint to evaluate")->required();
    eval_cmd->add_option("--split", eval_split, "which subset to evaluate")
        ->check(CLI::IsMember({"train", "validation", "test"}));
    eval_cmd->add_option("--bandwidth", eval_bandwidth, "calibration bandwidth");
    eval_cmd->add_option("--calibration", eval_calibration_path,
                         "reuse a saved calibration instead of fitting on validation");
    eval_cmd->add_flag("--affine-calibration", eval_affine,
                       "use the fixed 4*raw+1 map instead of local regression");
    eval_cmd->add_option("--report", report_path, "report CSV path");
    eval_cmd->add_option("--threads", eval_threads, "worker threads");

    // ---- predict --------------------------------------------------------
    auto* predict_cmd = app.add_subcommand("predict", "score a TSV of sentence pairs");
    EmbeddingOptions predict_emb;
    add_embedding_options(predict_cmd, predict_emb);
    std::string predict_model_path, pairs_path, predict_calibration_path, predict_out;
    std::string predict_format = "csv";
    predict_cmd->add_option("--model", predict_model_path, "checkpoint")->required();
    predict_cmd->add_option("--pairs", pairs_path, "TSV with two sentence columns")->required();
    predict_cmd->add_option("--calibration", predict_calibration_path,
                            "saved calibration (defaults to the affine map)");
    predict_cmd->add_option("--format", predict_format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));
    predict_cmd->add_option("--out", predict_out, "output path (default stdout)");

    // ---- analyze-words --------------------------------------------------
    auto* words_cmd =
        app.add_subcommand("analyze-words", "cosine distances between word embeddings");
    EmbeddingOptions words_emb;
    add_embedding_options(words_cmd, words_emb);
    std::string words_a, words_b, words_format = "text", words_out;
    words_cmd->add_option("--sentence-a", words_a, "first sentence")->required();
    words_cmd->add_option("--sentence-b", words_b, "second sentence")->required();
    words_cmd->add_option("--format", words_format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));
    words_cmd->add_option("--out", words_out, "output path (default stdout)");

    // ---- analyze-contexts -----------------------------------------------
    auto* ctx_cmd =
        app.add_subcommand("analyze-contexts", "cosine distances between local contexts");
    EmbeddingOptions ctx_emb;
    add_embedding_options(ctx_cmd, ctx_emb);
    std::string ctx_model_path, ctx_a, ctx_b, ctx_format = "text", ctx_out;
    ctx_cmd->add_option("--model", ctx_model_path, "checkpoint with the trained filter bank")
        ->required();
    ctx_cmd->add_option("--sentence-a", ctx_a, "first sentence")->required();
    ctx_cmd->add_option("--sentence-b", ctx_b, "second sentence")->required();
    ctx_cmd->add_option("--format", ctx_format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));
    ctx_cmd->add_option("--out", ctx_out, "output path (default stdout)");

    // ---- ablate ---------------------------------------------------------
    auto* ablate_cmd =
        app.add_subcommand("ablate", "train and evaluate one model per window length");
    EmbeddingOptions ablate_emb;
    DataOptions ablate_data;
    add_embedding_options(ablate_cmd, ablate_emb);
    add_data_options(ablate_cmd, ablate_data);
    std::string windows_spec = "3,5,7,9", ablate_out;
    std::size_t ablate_filters = 300, ablate_hidden = 50;
    std::uint64_t ablate_seed = 0;
    TrainConfig ablate_train;
    double ablate_bandwidth = 0.25;
    ablate_cmd->add_option("--windows", windows_spec, "comma-separated window lengths");
    ablate_cmd->add_option("--filters", ablate_filters, "number of convolution filters");
    ablate_cmd->add_option("--hidden", ablate_hidden, "LSTM hidden width");
    ablate_cmd->add_option("--epochs", ablate_train.epochs, "training epochs per window");
    ablate_cmd->add_option("--batch", ablate_train.batch_size, "minibatch size");
    ablate_cmd->add_option("--lr-scale", ablate_train.lr_scale, "Adadelta step multiplier");
    ablate_cmd->add_option("--seed", ablate_seed, "shared seed for every window");
    ablate_cmd->add_option("--bandwidth", ablate_bandwidth, "calibration bandwidth");
    ablate_cmd->add_option("--threads", ablate_train.threads, "worker threads");
    ablate_cmd->add_option("--out", ablate_out, "ablation CSV path (default stdout)");

    // ---- calibrate ------------------------------------------------------
    auto* calib_cmd = app.add_subcommand("calibrate", "fit and save a calibration");
    EmbeddingOptions calib_emb;
    DataOptions calib_data;
    add_embedding_options(calib_cmd, calib_emb);
    add_data_options(calib_cmd, calib_data);
    std::string calib_model_path, calib_out = "calibration.csv", calib_split = "validation";
    double calib_bandwidth = 0.25;
    std::size_t calib_threads = 1;
    calib_cmd->add_option("--model", calib_model_path, "checkpoint")->required();
    calib_cmd->add_option("--split", calib_split, "fitting split")
        ->check(CLI::IsMember({"train", "validation", "test"}));
    calib_cmd->add_option("--bandwidth", calib_bandwidth, "calibration bandwidth");
    calib_cmd->add_option("--threads", calib_threads, "worker threads");
    calib_cmd->add_option("--out", calib_out, "calibration output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // every malformed invocation maps to the usage exit code
    }

    if (train_cmd->parsed()) {
        if (window % 2 == 0 || window == 0)
            throw usage_error("--window must be an odd positive integer");
        const EmbeddingTable table = load_table(train_emb);
        const DatasetSplit split = load_split(train_data);
        ModelHyperparams hp;
        hp.embedding_dim = table.dim;
        hp.n_filters = filters;
        hp.window = window;
        hp.hidden_dim = hidden;
        hp.seed = seed;
        hp.embedding_id = std::filesystem::path(train_emb.path).filename().string();
        train_cfg.seed = seed;
        train_cfg.train_embeddings = train_embeddings;
        if (deterministic) train_cfg.threads = 1;
        if (clip > 0.0) train_cfg.clip_norm = clip;
        if (patience > 0) train_cfg.patience = patience;

        const SiameseModel model = init_model(hp);
        const TrainResult result = train(model, split, table, train_cfg);
        save_checkpoint(result.model, out_model);
        if (!log_path.empty()) write_epoch_log_csv(result.log, log_path);
        if (!out_embeddings.empty()) {
            if (!result.tuned_embeddings)
                throw usage_error("--out-embeddings requires --train-embeddings");
            save_embeddings_text(*result.tuned_embeddings, out_embeddings);
        }
        const EpochStats& last = result.log.back();
        std::printf("trained %zu epochs, train_mse %.6f, val_mse %.6f, saved %s\n",
                    result.log.size(), last.train_mse, last.val_mse, out_model.c_str());
        return 0;
    }

    if (eval_cmd->parsed()) {
        const EmbeddingTable table = load_table(eval_emb);
        const DatasetSplit split = load_split(eval_data);
        const SiameseModel model = load_checkpoint(eval_model_path);
        std::optional<CalibrationModel> calibration;
        if (!eval_calibration_path.empty())
            calibration = CalibrationModel::load(eval_calibration_path);
        else if (eval_affine)
            calibration = CalibrationModel::affine();
        else
            calibration = fit_on_validation(model, split, table, eval_bandwidth, eval_threads);
        const EvaluationResult result =
            evaluate(model, pick_subset(split, eval_split), table, calibration, eval_threads);
        write_report_csv(result, report_path);
        std::printf("pearson %.4f  spearman %.4f  mse %.4f  (n=%zu) -> %s\n",
                    result.report.pearson, result.report.spearman, result.report.mse,
                    result.report.n, report_path.c_str());
        return 0;
    }

    if (predict_cmd->parsed()) {
        const EmbeddingTable table = load_table(predict_emb);
        const SiameseModel model = load_checkpoint(predict_model_path);
        const CalibrationModel calibration =
            predict_calibration_path.empty() ? CalibrationModel::affine()
                                             : CalibrationModel::load(predict_calibration_path);
        const auto rows = score_pairs(model, calibration, pairs_path, table);
        write_text_output(predict_out,
                          predict_format == "csv" ? format_pairs_csv(rows)
                                                  : format_pairs_text(rows));
        return 0;
    }

    if (words_cmd->parsed()) {
        const EmbeddingTable table = load_table(words_emb);
        const DistanceMatrix m =
            word_distance_matrix(tokenize(words_a), tokenize(words_b), table);
        write_text_output(words_out,
                          words_format == "csv" ? format_matrix_csv(m) : format_matrix_text(m));
        return 0;
    }

    if (ctx_cmd->parsed()) {
        const EmbeddingTable table = load_table(ctx_emb);
        const SiameseModel model = load_checkpoint(ctx_model_path);
        const DistanceMatrix m =
            context_distance_matrix(tokenize(ctx_a), tokenize(ctx_b), model, table);
        write_text_output(ctx_out,
                          ctx_format == "csv" ? format_matrix_csv(m) : format_matrix_text(m));
        return 0;
    }

    if (ablate_cmd->parsed()) {
        const EmbeddingTable table = load_table(ablate_emb);
        const DatasetSplit split = load_split(ablate_data);
        AblationConfig cfg;
        cfg.hp.embedding_dim = table.dim;
        cfg.hp.n_filters = ablate_filters;
        cfg.hp.hidden_dim = ablate_hidden;
        cfg.hp.seed = ablate_seed;
        cfg.hp.embedding_id = std::filesystem::path(ablate_emb.path).filename().string();
        cfg.train = ablate_train;
        cfg.train.seed = ablate_seed;
        cfg.bandwidth = ablate_bandwidth;
        const auto rows = run_ablation(parse_windows(windows_spec), split, table, cfg);
        write_text_output(ablate_out, format_ablation_csv(rows));
        bool all_ok = true;
        for (const auto& row : rows) all_ok = all_ok && row.ok;
        return all_ok ? 0 : 3;
    }

    if (calib_cmd->parsed()) {
        const EmbeddingTable table = load_table(calib_emb);
        const DatasetSplit split = load_split(calib_data);
        const SiameseModel model = load_checkpoint(calib_model_path);
        const std::vector<SentencePair>& subset = pick_subset(split, calib_split);
        if (subset.empty()) throw data_error("calibration split '" + calib_split + "' is empty");
        const EvaluationResult scored =
            evaluate(model, subset, table, std::nullopt, calib_threads);
        std::vector<double> raw, gold;
        for (const PairScore& p : scored.pairs) {
            raw.push_back(p.raw);
            gold.push_back(p.gold);
        }
        const CalibrationModel calibration = fit_calibration(raw, gold, calib_bandwidth);
        calibration.save(calib_out);
        std::printf("calibration fitted on %zu pairs -> %s\n", raw.size(), calib_out.c_str());
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const stsim::usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const stsim::data_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const stsim::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
