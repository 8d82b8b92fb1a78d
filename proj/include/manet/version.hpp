#ifndef MANET_VERSION_HPP
#define MANET_VERSION_HPP

namespace manet {

constexpr const char* kVersion = "1.0.0";

} // namespace manet

#endif
