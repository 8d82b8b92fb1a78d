#include "manet/vhr.hpp"

#include <cstring>

#include "manet/hash.hpp"

namespace manet {

Position vhr_center(NodeId id, double field_width, double field_height) {
    ByteWriter w;
    w.str("vhr").u32(id);
    const Digest d = hash_digest(w.bytes());
    std::uint64_t h1, h2;
    std::memcpy(&h1, d.data(), 8);
    std::memcpy(&h2, d.data() + 8, 8);
    const auto wi = static_cast<std::uint64_t>(field_width);
    const auto hi = static_cast<std::uint64_t>(field_height);
    Position p;
    p.x = wi > 0 ? static_cast<double>(h1 % wi) : 0.0;
    p.y = hi > 0 ? static_cast<double>(h2 % hi) : 0.0;
    return p;
}

} // namespace manet
