#include "stsim/kernel.hpp"

#include <cmath>

namespace stsim {

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] x [0,1) uniforms; u1 > 0 so log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void fill_gaussian(Rng& rng, std::span<double> out, double stddev) {
    for (double& x : out) x = stddev * rng.gaussian();
}

Matrix gaussian_init(std::size_t rows, std::size_t cols, double stddev, std::uint64_t seed) {
    if (rows == 0 || cols == 0) throw numeric_error("gaussian_init: zero-sized shape");
    if (!(stddev > 0.0)) throw numeric_error("gaussian_init: stddev must be positive");
    Matrix m(rows, cols);
    Rng rng(seed);
    fill_gaussian(rng, m.data, stddev);
    return m;
}

Vec gaussian_init_vec(std::size_t n, double stddev, std::uint64_t seed) {
    if (n == 0) throw numeric_error("gaussian_init_vec: zero-sized shape");
    if (!(stddev > 0.0)) throw numeric_error("gaussian_init_vec: stddev must be positive");
    Vec v(n);
    Rng rng(seed);
    fill_gaussian(rng, v, stddev);
    return v;
}

Vec matvec(const Matrix& m, const Vec& v) {
    if (m.cols != v.size())
        throw numeric_error("matvec: shape mismatch (" + std::to_string(m.rows) + "x" +
                            std::to_string(m.cols) + " vs " + std::to_string(v.size()) + ")");
    Vec out(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.data.data() + r * m.cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

Vec matvec_transpose(const Matrix& m, const Vec& v) {
    if (m.rows != v.size())
        throw numeric_error("matvec_transpose: shape mismatch (" + std::to_string(m.rows) + "x" +
                            std::to_string(m.cols) + " vs " + std::to_string(v.size()) + ")");
    Vec out(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.data.data() + r * m.cols;
        const double vr = v[r];
        for (std::size_t c = 0; c < m.cols; ++c) out[c] += row[c] * vr;
    }
    return out;
}

void add_outer(Matrix& acc, const Vec& u, const Vec& v) {
    if (acc.rows != u.size() || acc.cols != v.size())
        throw numeric_error("add_outer: shape mismatch");
    for (std::size_t r = 0; r < acc.rows; ++r) {
        double* row = acc.data.data() + r * acc.cols;
        const double ur = u[r];
        for (std::size_t c = 0; c < acc.cols; ++c) row[c] += ur * v[c];
    }
}

Vec tanh_vec(const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

Vec sigmoid_vec(const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-v[i]));
    return out;
}

Vec concat(const Vec& a, const Vec& b) {
    Vec out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

void add_inplace(Vec& acc, const Vec& x) {
    if (acc.size() != x.size()) throw numeric_error("add_inplace: shape mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += x[i];
}

void axpy(double a, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw numeric_error("axpy: shape mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw numeric_error("dot: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double l1_distance(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw numeric_error("l1_distance: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

void require_finite(std::span<const double> xs, const std::string& what) {
    if (!all_finite(xs)) throw numeric_error(what + ": non-finite value");
}

std::size_t total_size(const std::vector<ParamView>& views) {
    std::size_t n = 0;
    for (const auto& v : views) n += v.values.size();
    return n;
}

}  // namespace stsim
