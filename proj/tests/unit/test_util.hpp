#pragma once

// Test-only reference implementations. These deliberately avoid the library's
// kernels: plain loops and scalar math only, so they stay an independent
// check on the production path.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "stsim/corpus.hpp"
#include "stsim/embedding.hpp"
#include "stsim/model.hpp"

namespace testutil {

using stsim::Vec;

inline std::string temp_path(const std::string& stem) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() / "stsim_tests";
    std::filesystem::create_directories(dir);
    return (dir / (stem + "_" + std::to_string(counter++))).string();
}

inline Vec naive_matvec(const stsim::Matrix& m, const Vec& v) {
    Vec out(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out[r] += m(r, c) * v[c];
    return out;
}

// Local contexts computed straight from the formula, without the library's
// window helper: lc_i[j] = tanh(b_j + sum over offsets/components).
inline std::vector<Vec> ref_local_contexts(const std::vector<Vec>& embedded,
                                           const stsim::ContextFilterBank& bank) {
    const long n = static_cast<long>(embedded.size());
    const long half = static_cast<long>(bank.window / 2);
    const std::size_t k = bank.in_dim;
    std::vector<Vec> out;
    for (long i = 0; i < n; ++i) {
        Vec lc(bank.n_filters, 0.0);
        for (std::size_t j = 0; j < bank.n_filters; ++j) {
            double acc = bank.bias[j];
            for (long off = -half; off <= half; ++off) {
                const long src = i + off;
                if (src < 0 || src >= n) continue;
                for (std::size_t c = 0; c < k; ++c)
                    acc += bank.weights(j, static_cast<std::size_t>(off + half) * k + c) *
                           embedded[static_cast<std::size_t>(src)][c];
            }
            lc[j] = std::tanh(acc);
        }
        out.push_back(lc);
    }
    return out;
}

// Hand-unrolled LSTM over a sequence, scalar loops only.
inline Vec ref_lstm_final(const stsim::LstmParameters& p, const std::vector<Vec>& inputs) {
    const std::size_t H = p.hidden_dim;
    Vec h(H, 0.0), c(H, 0.0);
    auto sigm = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    for (const Vec& x : inputs) {
        Vec nh(H), nc(H);
        for (std::size_t j = 0; j < H; ++j) {
            double ai = p.b_input[j], af = p.b_forget[j], ao = p.b_output[j], ag = p.b_cell[j];
            for (std::size_t m = 0; m < p.input_dim; ++m) {
                ai += p.w_input(j, m) * x[m];
                af += p.w_forget(j, m) * x[m];
                ao += p.w_output(j, m) * x[m];
                ag += p.w_cell(j, m) * x[m];
            }
            for (std::size_t m = 0; m < H; ++m) {
                ai += p.u_input(j, m) * h[m];
                af += p.u_forget(j, m) * h[m];
                ao += p.u_output(j, m) * h[m];
                ag += p.u_cell(j, m) * h[m];
            }
            nc[j] = sigm(af) * c[j] + sigm(ai) * std::tanh(ag);
            nh[j] = sigm(ao) * std::tanh(nc[j]);
        }
        h = nh;
        c = nc;
    }
    return h;
}

// End-to-end recomputation of the pair score through the reference pieces.
inline double ref_score(const stsim::SiameseModel& model,
                        const std::vector<std::string>& tokens_a,
                        const std::vector<std::string>& tokens_b,
                        const stsim::EmbeddingTable& table) {
    auto branch = [&](const std::vector<std::string>& tokens) {
        std::vector<Vec> embedded;
        for (const auto& t : tokens) embedded.push_back(table.lookup(t));
        const std::vector<Vec> lc = ref_local_contexts(embedded, model.bank);
        std::vector<Vec> fused;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            Vec f = embedded[i];
            f.insert(f.end(), lc[i].begin(), lc[i].end());
            fused.push_back(f);
        }
        return ref_lstm_final(model.lstm, fused);
    };
    const Vec ha = branch(tokens_a);
    const Vec hb = branch(tokens_b);
    double dist = 0.0;
    for (std::size_t j = 0; j < ha.size(); ++j) dist += std::abs(ha[j] - hb[j]);
    return std::exp(-dist);
}

// Textbook raw-moment form of the correlation coefficient.
inline double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Rank by counting: 1 + #smaller + #equal-others/2.
inline std::vector<double> naive_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double smaller = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++smaller;
            if (v[j] == v[i] && j != i) ++equal;
        }
        ranks[i] = 1.0 + smaller + equal / 2.0;
    }
    return ranks;
}

inline double naive_mse(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

// Closed-form least-squares affine fit y ~ a + b*x, returning its MSE on the
// same sample (with predictions clamped to the gold scale like the
// calibration it is compared against).
inline double affine_fit_mse(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double a = (sy - b * sx) / n;
    double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = std::min(5.0, std::max(1.0, a + b * x[i]));
        acc += (pred - y[i]) * (pred - y[i]);
    }
    return acc / n;
}

inline stsim::EmbeddingTable random_table(const std::vector<std::string>& tokens,
                                          std::size_t dim, unsigned seed,
                                          double scale = 1.0) {
    stsim::EmbeddingTable table;
    table.dim = dim;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (const auto& t : tokens) {
        Vec v(dim);
        for (double& x : v) x = dist(rng);
        table.insert(t, std::move(v));
    }
    return table;
}

inline stsim::SiameseModel random_model(std::size_t k, std::size_t d, std::size_t h,
                                        std::size_t l, std::uint64_t seed) {
    stsim::ModelHyperparams hp;
    hp.embedding_dim = k;
    hp.n_filters = d;
    hp.window = l;
    hp.hidden_dim = h;
    hp.seed = seed;
    return stsim::init_model(hp);
}

inline std::vector<std::string> toy_vocab() {
    return {"a", "woman", "is", "cooking", "fish", "man", "playing", "guitar", "the",
            "dog", "runs", "fast", "child", "reads", "book", "cat", "sleeps", "sun"};
}

// Deterministic toy pair set: identical pairs score 5, disjoint ones 1, and
// partial overlaps in between.
inline std::vector<stsim::SentencePair> toy_pairs(std::size_t count, unsigned seed) {
    const std::vector<std::string> vocab = toy_vocab();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<std::size_t> len(2, 5);
    std::vector<stsim::SentencePair> pairs;
    for (std::size_t i = 0; i < count; ++i) {
        stsim::SentencePair p;
        p.id = "toy" + std::to_string(i);
        const std::size_t la = len(rng);
        for (std::size_t t = 0; t < la; ++t) p.tokens_a.push_back(vocab[pick(rng)]);
        switch (i % 4) {
            case 0:  // identical
                p.tokens_b = p.tokens_a;
                p.gold = 5.0;
                break;
            case 1: {  // one word swapped
                p.tokens_b = p.tokens_a;
                p.tokens_b[pick(rng) % p.tokens_b.size()] = vocab[pick(rng)];
                p.gold = 3.8;
                break;
            }
            case 2: {  // shared prefix, different tail
                p.tokens_b = p.tokens_a;
                p.tokens_b.push_back(vocab[pick(rng)]);
                p.tokens_b.push_back(vocab[pick(rng)]);
                p.gold = 3.0;
                break;
            }
            default: {  // unrelated
                const std::size_t lb = len(rng);
                for (std::size_t t = 0; t < lb; ++t) p.tokens_b.push_back(vocab[pick(rng)]);
                p.gold = 1.0;
                break;
            }
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace testutil
