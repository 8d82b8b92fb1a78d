#include "manet/trace.hpp"

#include <cstring>
#include <iostream>

namespace manet {

Log::Level Log::level() {
    static Level lvl = [] {
        const char* v = std::getenv("SIM_LOG");
        if (!v) return Quiet;
        if (std::strcmp(v, "debug") == 0) return Debug;
        if (std::strcmp(v, "info") == 0) return Info;
        return Quiet;
    }();
    return lvl;
}

void Log::write(Level lvl, const std::string& msg) {
    if (level() >= lvl) std::cerr << msg << "\n";
}

} // namespace manet
