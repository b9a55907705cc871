#pragma once

#include <string>

#include "stsim/model.hpp"

namespace stsim {

/// Binary checkpoint: ASCII magic "CSIM", little-endian u32 version, a
/// length-prefixed UTF-8 key=value header (k, d, l, h, seed, embedding id),
/// then every parameter array as little-endian f64 in declared order.
/// Round-trips are bitwise on all parameters.
void save_checkpoint(const SiameseModel& model, const std::string& path);
SiameseModel load_checkpoint(const std::string& path);

}  // namespace stsim
