#include "stsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace stsim {

namespace {

double clamp_scale(double x) { return std::min(5.0, std::max(1.0, x)); }

double tricube(double u) {
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

}  // namespace

CalibrationModel CalibrationModel::affine() { return CalibrationModel{}; }

CalibrationModel fit_calibration(const std::vector<double>& raw, const std::vector<double>& gold,
                                 double bandwidth) {
    if (raw.size() != gold.size()) throw numeric_error("fit_calibration: length mismatch");
    if (!(bandwidth > 0.0) || bandwidth > 1.0)
        throw usage_error("fit_calibration: bandwidth must lie in (0,1]");
    const std::size_t n = raw.size();
    const std::size_t neighbors =
        static_cast<std::size_t>(std::ceil(bandwidth * static_cast<double>(n)));
    if (n < std::max<std::size_t>(5, neighbors))
        throw data_error("fit_calibration: too few points (" + std::to_string(n) + ")");
    if (neighbors < 2)
        throw data_error("fit_calibration: bandwidth*n gives fewer than 2 neighbors");
    for (double r : raw)
        if (!(r > 0.0) || r > 1.0)
            throw data_error("fit_calibration: raw score outside (0,1]");

    CalibrationModel model;
    model.affine_ = false;
    model.bandwidth_ = bandwidth;
    model.sample_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) model.sample_.emplace_back(raw[i], gold[i]);
    std::sort(model.sample_.begin(), model.sample_.end());
    return model;
}

double CalibrationModel::apply(double raw) const {
    if (affine_) return clamp_scale(4.0 * raw + 1.0);

    const std::size_t n = sample_.size();
    const std::size_t neighbors = std::min(
        n, static_cast<std::size_t>(std::ceil(bandwidth_ * static_cast<double>(n))));

    // Nearest window in the sorted sample: slide [lo, lo+neighbors) toward
    // the query while the far end is cheaper to drop.
    std::size_t lo = std::upper_bound(sample_.begin(), sample_.end(),
                                      std::make_pair(raw, std::numeric_limits<double>::max())) -
                     sample_.begin();
    lo = lo >= neighbors ? lo - neighbors : 0;
    lo = std::min(lo, n - neighbors);
    while (lo + neighbors < n &&
           std::abs(sample_[lo + neighbors].first - raw) < std::abs(sample_[lo].first - raw))
        ++lo;
    while (lo > 0 &&
           std::abs(sample_[lo - 1].first - raw) < std::abs(sample_[lo + neighbors - 1].first - raw))
        --lo;

    double max_dist = 0.0;
    for (std::size_t i = lo; i < lo + neighbors; ++i)
        max_dist = std::max(max_dist, std::abs(sample_[i].first - raw));

    // include every point tied with the boundary distance, so the
    // neighborhood does not depend on the order of equal raw scores
    std::size_t hi = lo + neighbors;
    while (lo > 0 && std::abs(sample_[lo - 1].first - raw) <= max_dist) --lo;
    while (hi < n && std::abs(sample_[hi].first - raw) <= max_dist) ++hi;

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double x = sample_[i].first;
        const double y = sample_[i].second;
        mean_y += y;
        const double w = max_dist > 0.0 ? tricube(std::abs(x - raw) / max_dist) : 1.0;
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    mean_y /= static_cast<double>(hi - lo);

    if (!(sw > 0.0)) return clamp_scale(mean_y);
    // denom/(sw*swxx) is the weighted spread fraction; treat a vanishing one
    // (all raw values effectively identical) as degenerate.
    const double denom = sw * swxx - swx * swx;
    if (std::abs(denom) <= 1e-9 * sw * swxx)
        return clamp_scale(swy / sw);  // neighborhood mean fallback
    const double slope = (sw * swxy - swx * swy) / denom;
    const double intercept = (swy - slope * swx) / sw;
    return clamp_scale(intercept + slope * raw);
}

void CalibrationModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write calibration '" + path + "'");
    out << "type," << (affine_ ? "affine" : "loess") << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "bandwidth,%.17g\n", bandwidth_);
    out << buf << "raw,gold\n";
    for (const auto& [r, g] : sample_) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", r, g);
        out << buf;
    }
    if (!out) throw data_error("write failed for '" + path + "'");
}

CalibrationModel CalibrationModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open calibration '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("type,", 0) != 0)
        throw data_error(path + ": missing calibration type line");
    const std::string type = line.substr(5);
    if (!std::getline(in, line) || line.rfind("bandwidth,", 0) != 0)
        throw data_error(path + ": missing bandwidth line");
    const double bandwidth = std::strtod(line.c_str() + 10, nullptr);
    if (!std::getline(in, line) || line != "raw,gold")
        throw data_error(path + ": missing sample header");

    CalibrationModel model;
    model.bandwidth_ = bandwidth;
    if (type == "affine") {
        model.affine_ = true;
        return model;
    }
    if (type != "loess") throw data_error(path + ": unknown calibration type '" + type + "'");
    model.affine_ = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string a, b;
        if (!std::getline(fields, a, ',') || !std::getline(fields, b))
            throw data_error(path + ": bad sample row '" + line + "'");
        model.sample_.emplace_back(std::strtod(a.c_str(), nullptr), std::strtod(b.c_str(), nullptr));
    }
    if (model.sample_.empty()) throw data_error(path + ": empty calibration sample");
    std::sort(model.sample_.begin(), model.sample_.end());
    return model;
}

}  // namespace stsim
