#pragma once

#include <span>

#include "stsim/kernel.hpp"

namespace stsim {

struct AdadeltaConfig {
    double rho = 0.95;
    double epsilon = 1e-6;
    // Vanilla Adadelta has no learning rate; this global multiplier on the
    // adaptive step is how a stated rate of 0.01 is honored.
    double lr_scale = 0.01;
};

/// Per-parameter running accumulators, same shape as the parameter array.
struct AdadeltaState {
    Vec avg_sq_grad;  // E[g^2]
    Vec avg_sq_step;  // E[dx^2]

    AdadeltaState() = default;
    explicit AdadeltaState(std::size_t n) : avg_sq_grad(n, 0.0), avg_sq_step(n, 0.0) {}
};

/// One Adadelta update:
///   E[g^2]  <- rho*E[g^2] + (1-rho)*g^2
///   dx      = -(sqrt(E[dx^2]+eps) / sqrt(E[g^2]+eps)) * g
///   E[dx^2] <- rho*E[dx^2] + (1-rho)*dx^2
///   param   <- param + lr_scale * dx
void adadelta_step(std::span<double> param, std::span<const double> grad, AdadeltaState& state,
                   const AdadeltaConfig& cfg);

}  // namespace stsim
