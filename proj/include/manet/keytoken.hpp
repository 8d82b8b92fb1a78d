#ifndef MANET_KEYTOKEN_HPP
#define MANET_KEYTOKEN_HPP

#include <optional>
#include <vector>

#include "manet/core.hpp"
#include "manet/rng.hpp"

namespace manet {

/// Simulation-grade key pair. seal() binds a payload to the secret half;
/// open() recovers it only with the matching public half and flags any
/// mismatch instead of returning garbage. The protocol logic only needs
/// round-trip plus mismatch detection, not real cryptography.
struct KeyToken {
    NodeId owner = 0;
    Digest secret_part{};
    Digest public_part{};
};

KeyToken make_key_token(NodeId owner, Rng& rng);

/// Deterministic: same (secret, message) always yields the same bytes.
std::vector<std::uint8_t> seal(const Digest& secret_part,
                               const std::uint8_t* msg, std::size_t len);

inline std::vector<std::uint8_t> seal(const Digest& secret_part,
                                      const std::vector<std::uint8_t>& msg) {
    return seal(secret_part, msg.data(), msg.size());
}

/// Returns the original message, or nullopt when the sealed bytes do not
/// verify against this public half.
std::optional<std::vector<std::uint8_t>> open(const Digest& public_part,
                                              const std::vector<std::uint8_t>& sealed);

/// Public half derived from a secret half; what make_key_token publishes.
Digest derive_public_part(const Digest& secret_part);

} // namespace manet

#endif
