#ifndef MANET_MOBILITY_HPP
#define MANET_MOBILITY_HPP

#include <optional>
#include <vector>

#include "manet/core.hpp"
#include "manet/rng.hpp"

namespace manet {

/// Simulation field rectangle [0, width] x [0, height], meters.
struct Field {
    double width = 0.0;
    double height = 0.0;

    bool contains(const Position& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

/// Advances p by v*dt inside the field, reflecting off the edges. Exact for
/// any dt (coordinates fold over a 2*span triangle wave), so multiple
/// bounces within one step are handled. Flips velocity components for odd
/// bounce counts.
void reflect_advance(Position& p, double& vx, double& vy, double dt, const Field& field);

struct ScriptedMove {
    SimTime start = 0;
    SimTime end = 0;
    double vx = 0.0;
    double vy = 0.0;
};

/// Per-node mobility state. Modes: static, random waypoint, or scripted
/// velocity windows (used for teleport-free deterministic scenarios).
struct MobilityState {
    enum class Mode { Static, Waypoint, Scripted };

    Mode mode = Mode::Static;
    double vx = 0.0;
    double vy = 0.0;
    double speed_min = 0.0;
    double speed_max = 0.0;
    std::optional<Position> waypoint;
    double waypoint_speed = 0.0;
    std::vector<ScriptedMove> script;
};

/// Advance one node by dt seconds at sim time `now` (time at step start).
void step_node_mobility(Position& pos, MobilityState& st, double dt, SimTime now,
                        const Field& field, Rng& rng);

} // namespace manet

#endif
