#include "stsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "stsim/evaluate.hpp"

namespace stsim {

namespace {

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

DistanceMatrix build_matrix(const std::vector<std::string>& row_labels,
                            const std::vector<std::string>& col_labels,
                            const std::vector<Vec>& rows, const std::vector<Vec>& cols) {
    DistanceMatrix m;
    m.row_labels = row_labels;
    m.col_labels = col_labels;
    m.values = Matrix(rows.size(), cols.size());
    m.valid.assign(rows.size() * cols.size(), 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (norm2(rows[r]) == 0.0 || norm2(cols[c]) == 0.0) {
                m.valid[r * m.values.cols + c] = 0;  // marked cell, not a crash
                m.values(r, c) = std::numeric_limits<double>::quiet_NaN();
            } else {
                m.values(r, c) = cosine_distance(rows[r], cols[c]);
            }
        }
    }
    return m;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace

double cosine_distance(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw numeric_error("cosine_distance: shape mismatch");
    const double nu = norm2(u);
    const double nv = norm2(v);
    if (nu == 0.0 || nv == 0.0) throw numeric_error("cosine_distance: zero-norm input");
    return 1.0 - dot(u, v) / (nu * nv);
}

DistanceMatrix word_distance_matrix(const std::vector<std::string>& tokens_a,
                                    const std::vector<std::string>& tokens_b,
                                    const EmbeddingTable& table) {
    if (tokens_a.empty() || tokens_b.empty())
        throw data_error("word_distance_matrix: empty sentence");
    std::vector<Vec> rows, cols;
    rows.reserve(tokens_a.size());
    cols.reserve(tokens_b.size());
    for (const auto& t : tokens_a) rows.push_back(table.lookup(t));
    for (const auto& t : tokens_b) cols.push_back(table.lookup(t));
    return build_matrix(tokens_a, tokens_b, rows, cols);
}

DistanceMatrix context_distance_matrix(const std::vector<std::string>& tokens_a,
                                       const std::vector<std::string>& tokens_b,
                                       const SiameseModel& model, const EmbeddingTable& table) {
    const BranchForward fa = encode_branch(model, tokens_a, table);
    const BranchForward fb = encode_branch(model, tokens_b, table);
    return build_matrix(tokens_a, tokens_b, fa.cnn.outputs, fb.cnn.outputs);
}

std::string format_matrix_csv(const DistanceMatrix& m) {
    std::ostringstream out;
    char buf[48];
    for (const auto& label : m.col_labels) out << ',' << csv_quote(label);
    out << '\n';
    for (std::size_t r = 0; r < m.values.rows; ++r) {
        out << csv_quote(m.row_labels[r]);
        for (std::size_t c = 0; c < m.values.cols; ++c) {
            if (!m.cell_valid(r, c)) {
                out << ",nan";
            } else {
                std::snprintf(buf, sizeof(buf), ",%.6f", m.values(r, c));
                out << buf;
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string format_matrix_text(const DistanceMatrix& m) {
    std::size_t label_width = 0;
    for (const auto& l : m.row_labels) label_width = std::max(label_width, l.size());
    std::vector<std::size_t> col_width(m.col_labels.size());
    for (std::size_t c = 0; c < m.col_labels.size(); ++c)
        col_width[c] = std::max<std::size_t>(m.col_labels[c].size(), 4);

    std::ostringstream out;
    out << std::string(label_width, ' ');
    for (std::size_t c = 0; c < m.col_labels.size(); ++c) {
        out << "  " << std::string(col_width[c] - m.col_labels[c].size(), ' ')
            << m.col_labels[c];
    }
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < m.values.rows; ++r) {
        out << m.row_labels[r] << std::string(label_width - m.row_labels[r].size(), ' ');
        for (std::size_t c = 0; c < m.values.cols; ++c) {
            if (!m.cell_valid(r, c))
                std::snprintf(buf, sizeof(buf), "n/a");
            else
                std::snprintf(buf, sizeof(buf), "%.2f", m.values(r, c));
            const std::size_t w = std::strlen(buf);
            out << "  " << std::string(col_width[c] > w ? col_width[c] - w : 0, ' ') << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<ScoredPair> score_pairs(const SiameseModel& model,
                                    const CalibrationModel& calibration,
                                    const std::string& pairs_path, const EmbeddingTable& table) {
    std::ifstream in(pairs_path, std::ios::binary);
    if (!in) throw data_error("cannot open pairs file '" + pairs_path + "'");
    std::vector<ScoredPair> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() < 2)
            throw data_error(pairs_path + ": line " + std::to_string(line_no) +
                             ": need two tab-separated sentences");
        ScoredPair row;
        row.sentence_a = fields[0];
        row.sentence_b = fields[1];
        if (fields.size() >= 3 && !fields[2].empty()) {
            char* end = nullptr;
            const double g = std::strtod(fields[2].c_str(), &end);
            if (end != fields[2].c_str() + fields[2].size())
                throw data_error(pairs_path + ": line " + std::to_string(line_no) +
                                 ": bad gold value '" + fields[2] + "'");
            row.gold = g;
        }
        row.raw = score_raw(model, tokenize(row.sentence_a), tokenize(row.sentence_b), table);
        row.calibrated = calibration.apply(row.raw);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_pairs_csv(const std::vector<ScoredPair>& rows) {
    std::ostringstream out;
    out << "sentence_a,sentence_b,gold,raw,calibrated\n";
    char buf[96];
    for (const ScoredPair& r : rows) {
        out << csv_quote(r.sentence_a) << ',' << csv_quote(r.sentence_b) << ',';
        if (r.gold) {
            std::snprintf(buf, sizeof(buf), "%.17g", *r.gold);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", r.raw, r.calibrated);
        out << buf;
    }
    return out.str();
}

std::string format_pairs_text(const std::vector<ScoredPair>& rows) {
    std::ostringstream out;
    char buf[64];
    for (const ScoredPair& r : rows) {
        out << r.sentence_a << '\n' << r.sentence_b << '\n';
        if (r.gold) {
            std::snprintf(buf, sizeof(buf), "gold: %.2f  ", *r.gold);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "score: %.2f (raw %.4f)\n\n", r.calibrated, r.raw);
        out << buf;
    }
    return out.str();
}

std::vector<AblationRow> run_ablation(const std::vector<std::size_t>& windows,
                                      const DatasetSplit& data, const EmbeddingTable& table,
                                      const AblationConfig& config) {
    std::vector<AblationRow> rows;
    rows.reserve(windows.size());
    for (std::size_t window : windows) {
        AblationRow row;
        row.window = window;
        try {
            ModelHyperparams hp = config.hp;
            hp.window = window;
            const SiameseModel model = init_model(hp);
            const TrainResult trained = train(model, data, table, config.train);
            const EmbeddingTable& active =
                trained.tuned_embeddings ? *trained.tuned_embeddings : table;

            std::optional<CalibrationModel> calibration;
            if (!data.validation.empty()) {
                const EvaluationResult val =
                    evaluate(trained.model, data.validation, active, std::nullopt,
                             config.train.threads);
                std::vector<double> raw, gold;
                raw.reserve(val.pairs.size());
                gold.reserve(val.pairs.size());
                for (const PairScore& p : val.pairs) {
                    raw.push_back(p.raw);
                    gold.push_back(p.gold);
                }
                calibration = fit_calibration(raw, gold, config.bandwidth);
            }

            const EvaluationResult test = evaluate(trained.model, data.test, active, calibration,
                                                   config.train.threads);
            row.ok = true;
            row.pearson = test.report.pearson;
            row.spearman = test.report.spearman;
            row.mse = test.report.mse;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_ablation_csv(const std::vector<AblationRow>& rows) {
    std::ostringstream out;
    out << "window,pearson,spearman,mse,status\n";
    char buf[128];
    for (const AblationRow& row : rows) {
        if (row.ok) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,ok\n", row.window, row.pearson,
                          row.spearman, row.mse);
            out << buf;
        } else {
            out << row.window << ",,,,failed: " << csv_quote(row.error) << '\n';
        }
    }
    return out.str();
}

}  // namespace stsim
