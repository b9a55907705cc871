#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stsim/analysis.hpp"
#include "stsim/calibration.hpp"
#include "stsim/checkpoint.hpp"
#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/evaluate.hpp"
#include "stsim/metrics.hpp"
#include "stsim/model.hpp"
#include "stsim/train.hpp"

namespace py = pybind11;
using namespace stsim;

namespace {

SiameseModel make_model(std::size_t embedding_dim, std::size_t n_filters, std::size_t window,
                        std::size_t hidden_dim, std::uint64_t seed,
                        const std::string& embedding_id) {
    ModelHyperparams hp;
    hp.embedding_dim = embedding_dim;
    hp.n_filters = n_filters;
    hp.window = window;
    hp.hidden_dim = hidden_dim;
    hp.seed = seed;
    hp.embedding_id = embedding_id;
    return init_model(hp);
}

TrainResult train_py(const SiameseModel& model, const std::vector<SentencePair>& train_pairs,
                     const EmbeddingTable& table,
                     const std::vector<SentencePair>& validation_pairs, std::size_t epochs,
                     std::size_t batch_size, double lr_scale, double rho, double epsilon,
                     std::uint64_t seed, double clip_norm, std::size_t patience,
                     bool train_embeddings, std::size_t threads) {
    DatasetSplit split;
    split.train = train_pairs;
    split.validation = validation_pairs;
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.batch_size = batch_size;
    cfg.lr_scale = lr_scale;
    cfg.rho = rho;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    if (clip_norm > 0.0) cfg.clip_norm = clip_norm;
    if (patience > 0) cfg.patience = patience;
    cfg.train_embeddings = train_embeddings;
    cfg.threads = threads;
    return train(model, split, table, cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Siamese CNN+LSTM sentence similarity: embeddings, scoring, training, metrics";

    py::register_exception<usage_error>(m, "UsageError", PyExc_ValueError);
    py::register_exception<data_error>(m, "DataError", PyExc_ValueError);
    py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<OovPolicy>(m, "OovPolicy")
        .value("ZERO_VECTOR", OovPolicy::ZeroVector)
        .value("HASHED_GAUSSIAN", OovPolicy::HashedGaussian);

    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def(py::init<>())
        .def_readwrite("oov_policy", &EmbeddingTable::oov_policy)
        .def_readwrite("oov_seed", &EmbeddingTable::oov_seed)
        .def_property_readonly("dim", [](const EmbeddingTable& t) { return t.dim; })
        .def("__len__", &EmbeddingTable::size)
        .def("insert", &EmbeddingTable::insert, py::arg("token"), py::arg("vector"))
        .def("lookup", &EmbeddingTable::lookup, py::arg("token"))
        .def("contains",
             [](const EmbeddingTable& t, const std::string& token) {
                 return t.find(token) != nullptr;
             })
        .def("checksum", &EmbeddingTable::checksum)
        .def("save_text", [](const EmbeddingTable& t, const std::string& p) {
            save_embeddings_text(t, p);
        })
        .def("save_binary", [](const EmbeddingTable& t, const std::string& p) {
            save_embeddings_binary(t, p);
        })
        .def_static("load", &load_embeddings_auto, py::arg("path"))
        .def_static("load_text", &load_embeddings_text, py::arg("path"))
        .def_static("load_binary", &load_embeddings_binary, py::arg("path"));

    py::class_<SentencePair>(m, "SentencePair")
        .def(py::init([](std::string id, std::vector<std::string> tokens_a,
                         std::vector<std::string> tokens_b, double gold) {
                 SentencePair p;
                 p.id = std::move(id);
                 p.tokens_a = std::move(tokens_a);
                 p.tokens_b = std::move(tokens_b);
                 p.gold = gold;
                 return p;
             }),
             py::arg("id"), py::arg("tokens_a"), py::arg("tokens_b"), py::arg("gold"))
        .def_readwrite("id", &SentencePair::id)
        .def_readwrite("tokens_a", &SentencePair::tokens_a)
        .def_readwrite("tokens_b", &SentencePair::tokens_b)
        .def_readwrite("gold", &SentencePair::gold);

    py::class_<SiameseModel>(m, "SiameseModel")
        .def(py::init(&make_model), py::arg("embedding_dim"), py::arg("n_filters") = 300,
             py::arg("window") = 5, py::arg("hidden_dim") = 50, py::arg("seed") = 0,
             py::arg("embedding_id") = "")
        .def_property_readonly("window",
                               [](const SiameseModel& mdl) { return mdl.hp.window; })
        .def_property_readonly("n_filters",
                               [](const SiameseModel& mdl) { return mdl.hp.n_filters; })
        .def_property_readonly("hidden_dim",
                               [](const SiameseModel& mdl) { return mdl.hp.hidden_dim; })
        .def_property_readonly("embedding_dim",
                               [](const SiameseModel& mdl) { return mdl.hp.embedding_dim; })
        .def("score_raw",
             [](const SiameseModel& mdl, const std::vector<std::string>& a,
                const std::vector<std::string>& b, const EmbeddingTable& table) {
                 return score_raw(mdl, a, b, table);
             },
             py::arg("tokens_a"), py::arg("tokens_b"), py::arg("table"))
        .def("save", &save_checkpoint, py::arg("path"))
        .def_static("load", &load_checkpoint, py::arg("path"));

    py::class_<EpochStats>(m, "EpochStats")
        .def_readonly("epoch", &EpochStats::epoch)
        .def_readonly("train_mse", &EpochStats::train_mse)
        .def_readonly("val_mse", &EpochStats::val_mse)
        .def_readonly("val_pearson", &EpochStats::val_pearson);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("model", &TrainResult::model)
        .def_readonly("log", &TrainResult::log)
        .def_readonly("tuned_embeddings", &TrainResult::tuned_embeddings);

    m.def("train", &train_py, py::arg("model"), py::arg("train_pairs"), py::arg("table"),
          py::arg("validation_pairs") = std::vector<SentencePair>{}, py::arg("epochs") = 10,
          py::arg("batch_size") = 32, py::arg("lr_scale") = 0.01, py::arg("rho") = 0.95,
          py::arg("epsilon") = 1e-6, py::arg("seed") = 0, py::arg("clip_norm") = 0.0,
          py::arg("patience") = 0, py::arg("train_embeddings") = false, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("pearson", &EvaluationReport::pearson)
        .def_readonly("spearman", &EvaluationReport::spearman)
        .def_readonly("mse", &EvaluationReport::mse)
        .def_readonly("n", &EvaluationReport::n);

    py::class_<PairScore>(m, "PairScore")
        .def_readonly("id", &PairScore::id)
        .def_readonly("raw", &PairScore::raw)
        .def_readonly("calibrated", &PairScore::calibrated)
        .def_readonly("gold", &PairScore::gold);

    py::class_<EvaluationResult>(m, "EvaluationResult")
        .def_readonly("report", &EvaluationResult::report)
        .def_readonly("pairs", &EvaluationResult::pairs);

    m.def("evaluate",
          [](const SiameseModel& mdl, const std::vector<SentencePair>& pairs,
             const EmbeddingTable& table, const std::optional<CalibrationModel>& calibration,
             std::size_t threads) { return evaluate(mdl, pairs, table, calibration, threads); },
          py::arg("model"), py::arg("pairs"), py::arg("table"),
          py::arg("calibration") = std::nullopt, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<CalibrationModel>(m, "CalibrationModel")
        .def_static("affine", &CalibrationModel::affine)
        .def_static("fit", &fit_calibration, py::arg("raw"), py::arg("gold"),
                    py::arg("bandwidth") = 0.25)
        .def_static("load", &CalibrationModel::load, py::arg("path"))
        .def("apply", &CalibrationModel::apply, py::arg("raw"))
        .def("save", &CalibrationModel::save, py::arg("path"))
        .def_property_readonly("bandwidth", &CalibrationModel::bandwidth)
        .def_property_readonly("is_affine", &CalibrationModel::is_affine);

    py::class_<DistanceMatrix>(m, "DistanceMatrix")
        .def_readonly("row_labels", &DistanceMatrix::row_labels)
        .def_readonly("col_labels", &DistanceMatrix::col_labels)
        .def("value",
             [](const DistanceMatrix& mtx, std::size_t r, std::size_t c) {
                 return mtx.values(r, c);
             })
        .def("valid", &DistanceMatrix::cell_valid)
        .def("to_csv", &format_matrix_csv)
        .def("to_text", &format_matrix_text);

    m.def("tokenize", &tokenize, py::arg("sentence"));
    m.def("load_sick_pairs",
          [](const std::string& path) {
              std::vector<SentencePair> out;
              for (auto& r : load_sick(path)) out.push_back(std::move(r.pair));
              return out;
          },
          py::arg("path"));
    m.def("pearson", &pearson, py::arg("x"), py::arg("y"));
    m.def("spearman", &spearman, py::arg("x"), py::arg("y"));
    m.def("mse", &mse, py::arg("pred"), py::arg("gold"));
    m.def("cosine_distance", &cosine_distance, py::arg("u"), py::arg("v"));
    m.def("word_distance_matrix", &word_distance_matrix, py::arg("tokens_a"),
          py::arg("tokens_b"), py::arg("table"));
    m.def("context_distance_matrix", &context_distance_matrix, py::arg("tokens_a"),
          py::arg("tokens_b"), py::arg("model"), py::arg("table"));

#ifdef STSIM_VERSION
    m.attr("__version__") = STSIM_VERSION;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
