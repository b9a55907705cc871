#include "stsim/adadelta.hpp"

#include <cmath>

namespace stsim {

void adadelta_step(std::span<double> param, std::span<const double> grad, AdadeltaState& state,
                   const AdadeltaConfig& cfg) {
    if (param.size() != grad.size() || param.size() != state.avg_sq_grad.size() ||
        param.size() != state.avg_sq_step.size())
        throw numeric_error("adadelta_step: shape mismatch");
    require_finite(grad, "adadelta_step: gradient");

    const double rho = cfg.rho;
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad[i];
        state.avg_sq_grad[i] = rho * state.avg_sq_grad[i] + (1.0 - rho) * g * g;
        const double step = -std::sqrt(state.avg_sq_step[i] + cfg.epsilon) /
                            std::sqrt(state.avg_sq_grad[i] + cfg.epsilon) * g;
        state.avg_sq_step[i] = rho * state.avg_sq_step[i] + (1.0 - rho) * step * step;
        param[i] += cfg.lr_scale * step;
    }
}

}  // namespace stsim
