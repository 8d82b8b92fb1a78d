#ifndef MANET_TRACE_HPP
#define MANET_TRACE_HPP

#include <cstdlib>
#include <sstream>
#include <string>

#include "manet/core.hpp"

namespace manet {

/// One trace record per line: `t=<us> ev=<kind> node=<id> k=v ...`,
/// UTF-8, LF endings. Records are emitted in event order, so two runs with
/// the same (config, seed) produce byte-identical traces.
class TraceSink {
  public:
    explicit TraceSink(bool enabled = true) : m_enabled(enabled) {}

    bool enabled() const { return m_enabled; }
    void set_enabled(bool e) { m_enabled = e; }

    class Record {
      public:
        Record(TraceSink* sink, SimTime t, const char* ev, long node) : m_sink(sink) {
            if (!m_sink) return;
            m_line = "t=" + std::to_string(t) + " ev=" + ev;
            if (node >= 0) m_line += " node=" + std::to_string(node);
        }

        Record& kv(const char* k, const std::string& v) {
            if (m_sink) m_line += std::string(" ") + k + "=" + v;
            return *this;
        }
        Record& kv(const char* k, const char* v) { return kv(k, std::string(v)); }
        Record& kv(const char* k, std::uint64_t v) { return kv(k, std::to_string(v)); }
        Record& kv(const char* k, int v) { return kv(k, std::to_string(v)); }
        Record& kv(const char* k, double v) { return kv(k, format_double(v, 3)); }
        Record& kv(const char* k, const Position& p) {
            return kv(k, format_double(p.x, 3) + "," + format_double(p.y, 3));
        }

        ~Record() {
            if (m_sink) m_sink->append(m_line);
        }

        Record(const Record&) = delete;
        Record& operator=(const Record&) = delete;

      private:
        TraceSink* m_sink;
        std::string m_line;
    };

    Record record(SimTime t, const char* ev, long node = -1) {
        return Record(m_enabled ? this : nullptr, t, ev, node);
    }

    const std::string& text() const { return m_text; }
    void clear() { m_text.clear(); }

  private:
    friend class Record;
    void append(const std::string& line) {
        m_text += line;
        m_text += '\n';
    }

    bool m_enabled;
    std::string m_text;
};

/// Stderr logger gated by the SIM_LOG environment variable
/// (quiet|info|debug; default quiet).
class Log {
  public:
    enum Level { Quiet = 0, Info = 1, Debug = 2 };

    static Level level();
    static void write(Level lvl, const std::string& msg);
};

} // namespace manet

#endif
