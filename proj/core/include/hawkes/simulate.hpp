#pragma once

#include <cstdint>

#include "hawkes/event_sequence.hpp"
#include "hawkes/theta.hpp"

namespace hawkes {

// Exact simulation by thinning: propose the next point from the current
// right-limit intensity, which dominates the true intensity until the next
// event because the exponential kernel only decays between events.
// Deterministic in (theta, horizon, seed).
EventSequence simulate(const Theta& theta, double horizon, std::uint64_t seed);

// Left-limit intensity at time t: an event at exactly t does not contribute.
double intensity_at(const EventSequence& events, double t, const Theta& theta);

namespace detail {
// Same thinning loop with alpha == 0 permitted (homogeneous Poisson
// degeneracy); test harness only, no public contract.
EventSequence simulate_unchecked(const Theta& theta, double horizon, std::uint64_t seed);
}  // namespace detail

}  // namespace hawkes
