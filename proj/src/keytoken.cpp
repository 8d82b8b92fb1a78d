#include "manet/keytoken.hpp"

#include "manet/hash.hpp"

namespace manet {

Digest derive_public_part(const Digest& secret_part) {
    ByteWriter w;
    w.str("vk").raw(secret_part.data(), secret_part.size());
    return hash_digest(w.bytes());
}

KeyToken make_key_token(NodeId owner, Rng& rng) {
    KeyToken t;
    t.owner = owner;
    for (int i = 0; i < 2; ++i) {
        std::uint64_t v = rng.next_u64();
        for (int b = 0; b < 8; ++b)
            t.secret_part[i * 8 + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    t.public_part = derive_public_part(t.secret_part);
    return t;
}

namespace {

Digest seal_tag(const Digest& public_part, const std::uint8_t* msg, std::size_t len) {
    ByteWriter w;
    w.str("seal").raw(public_part.data(), public_part.size()).u64(len).raw(msg, len);
    return hash_digest(w.bytes());
}

} // namespace

std::vector<std::uint8_t> seal(const Digest& secret_part,
                               const std::uint8_t* msg, std::size_t len) {
    const Digest pub = derive_public_part(secret_part);
    const Digest tag = seal_tag(pub, msg, len);
    std::vector<std::uint8_t> out;
    out.reserve(len + tag.size());
    out.insert(out.end(), msg, msg + len);
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

std::optional<std::vector<std::uint8_t>> open(const Digest& public_part,
                                              const std::vector<std::uint8_t>& sealed) {
    if (sealed.size() < 16) return std::nullopt;
    const std::size_t len = sealed.size() - 16;
    const Digest expect = seal_tag(public_part, sealed.data(), len);
    for (std::size_t i = 0; i < 16; ++i) {
        if (sealed[len + i] != expect[i]) return std::nullopt;
    }
    return std::vector<std::uint8_t>(sealed.begin(), sealed.begin() + static_cast<long>(len));
}

} // namespace manet
