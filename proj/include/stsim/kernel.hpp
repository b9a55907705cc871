#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stsim/error.hpp"

namespace stsim {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles with explicit shape.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
};

/// Deterministic random stream. Gaussian draws use Box-Muller over explicit
/// 53-bit uniforms so that a given seed yields the same values on every
/// platform and in every process.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal N(0, 1).
    double gaussian();

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// FNV-1a 64-bit hash; stable across builds and processes.
std::uint64_t fnv1a64(std::string_view s);

void fill_gaussian(Rng& rng, std::span<double> out, double stddev);

/// Matrix with i.i.d. N(0, stddev^2) entries from a seeded generator.
/// Same (shape, stddev, seed) always produces the identical matrix.
Matrix gaussian_init(std::size_t rows, std::size_t cols, double stddev, std::uint64_t seed);
Vec gaussian_init_vec(std::size_t n, double stddev, std::uint64_t seed);

// Dense kernels. All of them validate shapes and refuse to broadcast.
Vec matvec(const Matrix& m, const Vec& v);
Vec matvec_transpose(const Matrix& m, const Vec& v);
void add_outer(Matrix& acc, const Vec& u, const Vec& v);  // acc += u v^T
Vec tanh_vec(const Vec& v);
Vec sigmoid_vec(const Vec& v);
Vec concat(const Vec& a, const Vec& b);
void add_inplace(Vec& acc, const Vec& x);
void axpy(double a, const Vec& x, Vec& y);  // y += a*x
double dot(const Vec& a, const Vec& b);
double l1_distance(const Vec& a, const Vec& b);

bool all_finite(std::span<const double> xs);
void require_finite(std::span<const double> xs, const std::string& what);

/// Named view over one parameter array; the unit the optimizer, the
/// checkpoint writer and the gradient checker all iterate over.
struct ParamView {
    std::string name;
    std::span<double> values;
};

std::size_t total_size(const std::vector<ParamView>& views);

}  // namespace stsim
