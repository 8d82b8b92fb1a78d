#include "manet/mobility.hpp"

#include <cmath>

namespace manet {
namespace {

// Folds x into [0, span] over the 2*span triangle wave; flips dir when the
// fold lands on a descending segment.
void fold_axis(double& x, double& dir, double span) {
    if (span <= 0.0) {
        x = 0.0;
        return;
    }
    double m = std::fmod(x, 2.0 * span);
    if (m < 0.0) m += 2.0 * span;
    if (m > span) {
        m = 2.0 * span - m;
        dir = -dir;
    }
    x = m;
}

} // namespace

void reflect_advance(Position& p, double& vx, double& vy, double dt, const Field& field) {
    p.x += vx * dt;
    p.y += vy * dt;
    fold_axis(p.x, vx, field.width);
    fold_axis(p.y, vy, field.height);
}

void step_node_mobility(Position& pos, MobilityState& st, double dt, SimTime now,
                        const Field& field, Rng& rng) {
    switch (st.mode) {
        case MobilityState::Mode::Static:
            return;
        case MobilityState::Mode::Waypoint: {
            double remaining = dt;
            while (remaining > 0.0) {
                if (!st.waypoint) {
                    st.waypoint = Position{rng.uniform_range(0.0, field.width),
                                           rng.uniform_range(0.0, field.height)};
                    st.waypoint_speed = rng.uniform_range(st.speed_min, st.speed_max);
                }
                const double dist = distance(pos, *st.waypoint);
                const double reach = st.waypoint_speed * remaining;
                if (dist <= 1e-9 || reach >= dist) {
                    // waypoint turnover within this step
                    pos = *st.waypoint;
                    remaining -= (st.waypoint_speed > 0.0) ? dist / st.waypoint_speed : remaining;
                    st.waypoint.reset();
                    if (st.waypoint_speed <= 0.0) break;
                } else {
                    const double f = reach / dist;
                    pos.x += (st.waypoint->x - pos.x) * f;
                    pos.y += (st.waypoint->y - pos.y) * f;
                    remaining = 0.0;
                }
            }
            return;
        }
        case MobilityState::Mode::Scripted: {
            double vx = 0.0;
            double vy = 0.0;
            for (const auto& mv : st.script) {
                if (now >= mv.start && now < mv.end) {
                    vx = mv.vx;
                    vy = mv.vy;
                    break;
                }
            }
            st.vx = vx;
            st.vy = vy;
            if (vx != 0.0 || vy != 0.0) reflect_advance(pos, st.vx, st.vy, dt, field);
            return;
        }
    }
}

} // namespace manet
