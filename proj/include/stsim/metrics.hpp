#pragma once

#include <vector>

#include "stsim/error.hpp"

namespace stsim {

/// Sample Pearson correlation. Throws numeric_error when either series is
/// constant (undefined variance) or the lengths disagree / are below 2.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Average ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& v);

/// Pearson correlation of the average-ranked series. Exactly 1.0 whenever the
/// two rank vectors coincide.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

double mse(const std::vector<double>& pred, const std::vector<double>& gold);

}  // namespace stsim
