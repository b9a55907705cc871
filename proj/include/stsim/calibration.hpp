#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stsim/error.hpp"

namespace stsim {

/// Maps raw similarities from (0,1] onto the [1,5] gold scale.
///
/// Fitted form: local regression of degree 1. A query is predicted from its
/// ceil(bandwidth*n) nearest sample points (by raw score) under tricube
/// weights w = (1 - (dist/maxdist)^3)^3, then clamped to [1,5]. Degenerate
/// neighborhoods fall back to the neighborhood mean.
///
/// The affine form is the fixed map 4*raw + 1, the inverse of the training
/// target normalization; it is the default when nothing has been fitted.
class CalibrationModel {
public:
    /// The fixed affine map 4*raw + 1 (clamped).
    static CalibrationModel affine();

    double apply(double raw) const;

    bool is_affine() const { return affine_; }
    double bandwidth() const { return bandwidth_; }
    const std::vector<std::pair<double, double>>& sample() const { return sample_; }

    void save(const std::string& path) const;
    static CalibrationModel load(const std::string& path);

    friend CalibrationModel fit_calibration(const std::vector<double>& raw,
                                            const std::vector<double>& gold, double bandwidth);

private:
    bool affine_ = true;
    double bandwidth_ = 0.25;
    std::vector<std::pair<double, double>> sample_;  // (raw, gold), sorted by raw
};

/// Fits the local-regression calibration on (raw, gold) pairs.
CalibrationModel fit_calibration(const std::vector<double>& raw, const std::vector<double>& gold,
                                 double bandwidth);

}  // namespace stsim
