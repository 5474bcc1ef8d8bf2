#pragma once

#include <array>
#include <vector>

#include "hawkes/event_sequence.hpp"
#include "hawkes/theta.hpp"

namespace hawkes {

// Kernel-weighted jump sums over past events, d = t - tau_j:
//   x1 = sum alpha e^{-beta d},  x2 = sum alpha d e^{-beta d},
//   x3 = sum alpha d^2 e^{-beta d},  lambda = mu + x1.
// Every likelihood formula consumes these left-limit values.
struct CoreState {
    double lambda{0.0};
    double x1{0.0};
    double x2{0.0};
    double x3{0.0};
};

struct CorePath {
    std::vector<CoreState> at_events;  // left limits at each jump time
    CoreState at_horizon;              // left limit at the horizon
    EventSequence events;
    Theta theta;
};

// Evolve a state across an event-free interval of length dt.
CoreState decay(const CoreState& state, double dt, const Theta& theta);

// Right limit after an event fires: x1 jumps by alpha, x2 and x3 are
// continuous (their kernels vanish at d = 0).
CoreState absorb_event(const CoreState& state, const Theta& theta);

// All core states along a path in O(n) via the shifted-sum recursion.
CorePath core_path(const EventSequence& events, const Theta& theta);

// Integral of the intensity over [0, horizon], in closed form:
//   mu T + (alpha / beta) sum_j (1 - e^{-beta (T - tau_j)}).
double compensator(const EventSequence& events, const Theta& theta);

// Compensator increments between consecutive events (the first entry is
// measured from time zero). Exp(1) i.i.d. when theta generated the path.
std::vector<double> rescaled_interarrivals(const EventSequence& events, const Theta& theta);

namespace detail {
// integral_0^T X^(k)(s) ds for k = 1, 2, 3, via the primitives
// gamma_k(x) = integral_0^x u^k e^{-beta u} du summed over events.
std::array<double, 3> kernel_integrals(const EventSequence& events, const Theta& theta);
}  // namespace detail

}  // namespace hawkes
