#pragma once

// Optical-train description files.
//
//   path = DM              # optional, HV or DM
//   source = H             # optional input state (default: --state)
//   analyzer = H           # optional analysis axis (default: --state)
//   [polarizer]
//   epsilon = 0.01
//   theta = 0
//   [waveplate]
//   delta = 3.14159265     # rad
//   theta_deg = 22.5
//   [bs_r]
//   rp = 0.55
//   rs = 0.45
//   phi_deg = 9
//
// One section per element, in the order light meets them. Angles are radians
// unless the key carries a `_deg` suffix (`_rad` is accepted too).

#include <string>
#include <string_view>

#include "uwqkd/optics.hpp"

namespace uwqkd::io {

optics::OpticalTrain parse_train(std::string_view text);
optics::OpticalTrain load_train(const std::string& path);

}  // namespace uwqkd::io
