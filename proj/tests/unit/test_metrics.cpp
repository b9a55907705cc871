#include <cmath>
#include <random>

#include "doctest.h"
#include "stsim/metrics.hpp"
#include "test_util.hpp"

using namespace stsim;

namespace {

std::vector<double> random_series(std::size_t n, std::mt19937& rng, bool with_ties) {
    std::vector<double> out(n);
    if (with_ties) {
        std::uniform_int_distribution<int> dist(0, 4);
        for (double& x : out) x = 0.5 * dist(rng);
    } else {
        std::uniform_real_distribution<double> dist(-10.0, 10.0);
        for (double& x : out) x = dist(rng);
    }
    return out;
}

}  // namespace

TEST_CASE("pearson of affine relations") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y(5), z(5);
    for (std::size_t i = 0; i < 5; ++i) {
        y[i] = 2.0 * x[i] + 3.0;
        z[i] = -x[i];
    }
    CHECK(std::abs(pearson(x, y) - 1.0) < 1e-12);
    CHECK(std::abs(pearson(x, z) + 1.0) < 1e-12);
}

TEST_CASE("pearson rejects degenerate input") {
    CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), numeric_error);
    CHECK_THROWS_AS(pearson({1, 2, 3}, {4, 4, 4}), numeric_error);
    CHECK_THROWS_AS(pearson({1}, {2}), numeric_error);
    CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), numeric_error);
}

TEST_CASE("pearson agrees with the textbook formula on random data") {
    std::mt19937 rng(301);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x = random_series(20, rng, false);
        std::vector<double> y = random_series(20, rng, false);
        CHECK(std::abs(pearson(x, y) - testutil::naive_pearson(x, y)) < 1e-12);
    }
}

TEST_CASE("average ranks give ties their mean position") {
    CHECK(average_ranks({1, 2, 2, 3}) == std::vector<double>{1.0, 2.5, 2.5, 4.0});
    CHECK(average_ranks({5, 5, 5}) == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(average_ranks({3, 1, 2}) == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("spearman is exactly 1 for strictly monotone transforms") {
    std::mt19937 rng(302);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x = random_series(30, rng, trial % 2 == 0);
        // guard against a fully constant draw
        x[0] = -100.0;
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(0.3 * x[i]) + x[i];
        CHECK(spearman(x, y) == 1.0);
    }
}

TEST_CASE("spearman agrees with rank-then-pearson on tied data") {
    std::mt19937 rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x = random_series(25, rng, true);
        std::vector<double> y = random_series(25, rng, true);
        x[0] = -1;  // avoid constant series
        y[0] = -1;
        x[1] = 9;
        y[1] = 9;
        const double want = testutil::naive_pearson(testutil::naive_ranks(x),
                                                    testutil::naive_ranks(y));
        CHECK(std::abs(spearman(x, y) - want) < 1e-12);
    }
}

TEST_CASE("mse basics and the loop oracle") {
    CHECK(mse({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(mse({1, 1}, {2, 3}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK_THROWS_AS(mse({1, 2}, {1}), numeric_error);

    std::mt19937 rng(304);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a = random_series(15, rng, false);
        std::vector<double> b = random_series(15, rng, false);
        CHECK(std::abs(mse(a, b) - testutil::naive_mse(a, b)) < 1e-12);
    }
}
