#ifndef MANET_EVENT_QUEUE_HPP
#define MANET_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "manet/core.hpp"

namespace manet {

/// Discrete-event scheduler. (fire_at, seq) totally orders events; ties on
/// fire_at run in schedule order. Strictly single-threaded.
class EventQueue {
  public:
    using Handler = std::function<void()>;

    SimTime now() const { return m_clock; }

    std::uint64_t scheduled_count() const { return m_next_seq; }
    std::size_t pending() const { return m_queue.size(); }

    void schedule_at(SimTime fire_at, Handler fn) {
        if (fire_at < m_clock)
            throw std::logic_error("EventQueue: scheduling into the past");
        m_queue.push(Entry{fire_at, m_next_seq++, std::move(fn)});
    }

    void schedule_in(SimTime delay, Handler fn) {
        schedule_at(m_clock + delay, std::move(fn));
    }

    /// Processes every event with fire_at <= t_end, then leaves the clock
    /// at t_end. Events beyond the horizon stay queued and never fire.
    void run_until(SimTime t_end) {
        while (!m_queue.empty() && m_queue.top().fire_at <= t_end) {
            Entry e = m_queue.top();
            m_queue.pop();
            m_clock = e.fire_at;
            e.fn();
        }
        if (t_end > m_clock) m_clock = t_end;
    }

  private:
    struct Entry {
        SimTime fire_at;
        std::uint64_t seq;
        Handler fn;
    };

    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    SimTime m_clock = 0;
    std::uint64_t m_next_seq = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> m_queue;
};

} // namespace manet

#endif
