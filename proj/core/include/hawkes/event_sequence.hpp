#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hawkes {

// One realization of the point process: strictly increasing jump times on
// [0, horizon). An empty sequence is a valid realization.
struct EventSequence {
    std::vector<double> times;
    double horizon{0.0};

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
};

inline void validate_events(const EventSequence& events) {
    if (!(std::isfinite(events.horizon) && events.horizon > 0.0))
        throw std::invalid_argument("events: horizon must be positive and finite");
    double prev = -1.0;
    for (double t : events.times) {
        if (!std::isfinite(t) || t < 0.0 || t >= events.horizon)
            throw std::invalid_argument("events: times must lie in [0, horizon)");
        if (t <= prev && prev >= 0.0)
            throw std::invalid_argument("events: times must be strictly increasing");
        prev = t;
    }
}

inline EventSequence make_events(std::vector<double> times, double horizon) {
    EventSequence ev{std::move(times), horizon};
    validate_events(ev);
    return ev;
}

}  // namespace hawkes
