#ifndef MANET_HASH_HPP
#define MANET_HASH_HPP

#include <cstdint>
#include <cstring>
#include <string_view>
#include <vector>

#include "manet/core.hpp"

namespace manet {

/// The globally known hash function every node agrees on. Pinned to
/// MurmurHash3 x64 128 with a fixed seed; deterministic across runs and
/// platforms. Not cryptographic — adversarial collision resistance is
/// out of scope for the simulation.
Digest hash_digest(const std::uint8_t* data, std::size_t len);

inline Digest hash_digest(const std::vector<std::uint8_t>& bytes) {
    return hash_digest(bytes.data(), bytes.size());
}

inline Digest hash_digest(std::string_view s) {
    return hash_digest(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

/// Canonical little-endian byte encoder for hash and seal inputs.
class ByteWriter {
  public:
    ByteWriter& u8(std::uint8_t v) {
        m_bytes.push_back(v);
        return *this;
    }

    ByteWriter& u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) m_bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }

    ByteWriter& u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) m_bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }

    ByteWriter& f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        return u64(bits);
    }

    ByteWriter& raw(const std::uint8_t* data, std::size_t n) {
        m_bytes.insert(m_bytes.end(), data, data + n);
        return *this;
    }

    ByteWriter& str(std::string_view s) {
        return raw(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    }

    const std::vector<std::uint8_t>& bytes() const { return m_bytes; }

  private:
    std::vector<std::uint8_t> m_bytes;
};

/// PseudoId generator: digest of the canonical encoding of (position, time).
PseudoId make_pseudo_id(const Position& pos, SimTime t);

} // namespace manet

#endif
