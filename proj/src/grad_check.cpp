#include "stsim/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace stsim {

namespace {

void check_span(const std::function<double()>& loss, std::span<double> params,
                std::span<const double> analytic, double h, const std::string& name,
                GradCheckReport& report) {
    if (params.size() != analytic.size())
        throw numeric_error("grad_check: analytic gradient shape mismatch for " + name);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = loss();
        params[i] = saved - h;
        const double down = loss();
        params[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down))
            throw numeric_error("grad_check: non-finite loss at perturbed point of " + name);
        const double numeric = (up - down) / (2.0 * h);
        const double a = analytic[i];
        const double rel =
            std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_param = name;
            report.worst_index = i;
            report.worst_analytic = a;
            report.worst_numeric = numeric;
        }
        ++report.checked;
    }
}

}  // namespace

GradCheckReport grad_check(const std::function<double()>& loss, std::span<double> params,
                           std::span<const double> analytic, double h, const std::string& name) {
    if (!(h > 0.0)) throw numeric_error("grad_check: perturbation must be positive");
    GradCheckReport report;
    check_span(loss, params, analytic, h, name, report);
    return report;
}

GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::vector<ParamView>& params,
                           const std::vector<ParamView>& analytic, double h) {
    if (!(h > 0.0)) throw numeric_error("grad_check: perturbation must be positive");
    if (params.size() != analytic.size())
        throw numeric_error("grad_check: parameter/gradient view count mismatch");
    GradCheckReport report;
    for (std::size_t v = 0; v < params.size(); ++v)
        check_span(loss, params[v].values, analytic[v].values, h, params[v].name, report);
    return report;
}

}  // namespace stsim
