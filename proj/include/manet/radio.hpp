#ifndef MANET_RADIO_HPP
#define MANET_RADIO_HPP

#include <cmath>

#include "manet/core.hpp"

namespace manet {

/// Unit-disk radio: a transmission reaches exactly the nodes within radius
/// r at transmit time. Propagation runs at the speed of light.
struct RadioModel {
    double range = 300.0; // r, meters

    bool in_range(double dist) const { return dist <= range; }

    /// Propagation delay in integer microseconds, minimum 1 so cause
    /// precedes effect in integer time.
    SimTime propagation_delay(double dist) const {
        const SimTime d = static_cast<SimTime>(std::ceil(dist / kMetersPerMicro));
        return d < 1 ? 1 : d;
    }
};

} // namespace manet

#endif
