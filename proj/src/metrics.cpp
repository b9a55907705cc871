#include "stsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stsim {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw numeric_error("pearson: length mismatch");
    if (x.size() < 2) throw numeric_error("pearson: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw numeric_error("pearson: constant input series");
    // sqrt(sxx*syy) keeps r == 1.0 exact when the two series are identical.
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size(), 0.0);
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        // positions i..j (0-based) share the mean 1-based rank
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw numeric_error("spearman: length mismatch");
    return pearson(average_ranks(x), average_ranks(y));
}

double mse(const std::vector<double>& pred, const std::vector<double>& gold) {
    if (pred.size() != gold.size()) throw numeric_error("mse: length mismatch");
    if (pred.empty()) throw numeric_error("mse: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - gold[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

}  // namespace stsim
