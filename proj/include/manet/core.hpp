#ifndef MANET_CORE_HPP
#define MANET_CORE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace manet {

/// Node identifier, unique per node and stable for the whole run.
using NodeId = std::uint32_t;

/// Simulated time in integer microseconds. Integer time gives exact event ordering.
using SimTime = std::uint64_t;

/// Per-update random authentication code handed to position servers.
using AuthCode = std::uint64_t;

constexpr SimTime kMicrosPerSecond = 1000000;
constexpr SimTime kMicrosPerMilli = 1000;

/// Radio propagation speed (speed of light), m/s.
constexpr double kPropagationSpeed = 3.0e8;

/// Same constant expressed in meters per microsecond.
constexpr double kMetersPerMicro = kPropagationSpeed * 1e-6;

inline SimTime seconds_to_micros(double s) {
    return static_cast<SimTime>(s * 1e6 + 0.5);
}

inline double micros_to_seconds(SimTime t) {
    return static_cast<double>(t) * 1e-6;
}

/// 2-D position in meters.
struct Position {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Position& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Position& o) const { return !(*this == o); }
};

/// Euclidean distance in meters.
inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Trust levels are single decimal digits so per-hop values concatenate
// into trust strings.
constexpr int kTrustMin = 0;
constexpr int kTrustMax = 9;

inline int clamp_trust(int v) {
    if (v < kTrustMin) return kTrustMin;
    if (v > kTrustMax) return kTrustMax;
    return v;
}

/// 128-bit message digest.
using Digest = std::array<std::uint8_t, 16>;

std::string to_hex(const std::uint8_t* data, std::size_t n);

/// Anonymous per-request node handle: digest of (position, time).
struct PseudoId {
    Digest digest{};

    bool operator==(const PseudoId& o) const { return digest == o.digest; }
    bool operator!=(const PseudoId& o) const { return digest != o.digest; }
    bool operator<(const PseudoId& o) const { return digest < o.digest; }

    bool is_zero() const {
        for (auto b : digest)
            if (b != 0) return false;
        return true;
    }

    std::string hex() const { return to_hex(digest.data(), digest.size()); }
    /// First 8 bytes as hex; used in traces where full width is noise.
    std::string short_hex() const { return to_hex(digest.data(), 8); }
};

/// Fixed-point style formatting helpers (snprintf-based, locale independent).
std::string format_double(double v, int decimals);

} // namespace manet

#endif
