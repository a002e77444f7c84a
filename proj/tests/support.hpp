#pragma once

#include "uwqkd/config.hpp"
#include "uwqkd/qber.hpp"

namespace testing {

inline uwqkd::Link link_for(const char* preset, uwqkd::channel::PropagationMode mode, double chi = 0.03) {
    auto cfg = uwqkd::io::preset(preset);
    cfg.channel = uwqkd::channel::make_scenario(
        mode, chi, chi > 0.1 ? uwqkd::channel::WaterType::JerlovII : uwqkd::channel::WaterType::JerlovI);
    return uwqkd::io::make_link(cfg, uwqkd::default_radiance_table());
}

inline uwqkd::ProtocolParams protocol_for(const char* preset) { return uwqkd::io::preset(preset).protocol; }

}  // namespace testing
