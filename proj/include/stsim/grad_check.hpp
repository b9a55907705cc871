#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stsim/kernel.hpp"

namespace stsim {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    std::size_t checked = 0;

    bool passes(double tolerance) const { return max_rel_error < tolerance; }
};

/// Central-difference check of an analytic gradient.
///
/// For every scalar in `params` (live storage, perturbed in place and
/// restored), compares `analytic` against (L(x+h) - L(x-h)) / 2h where L is
/// `loss`, which must recompute the loss from the current parameter values.
/// Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport grad_check(const std::function<double()>& loss, std::span<double> params,
                           std::span<const double> analytic, double h,
                           const std::string& name = "param");

/// Same check across a set of named parameter arrays; `analytic` views must
/// parallel `params` in order and shape.
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::vector<ParamView>& params,
                           const std::vector<ParamView>& analytic, double h);

}  // namespace stsim
