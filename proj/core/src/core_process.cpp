#include "hawkes/core_process.hpp"

#include <cmath>

namespace hawkes {

namespace {

// Scaled state (s0, s1, s2) = (x1, x2, x3) / alpha. The per-event step for
// gap d is exact algebra on the shifted sums:
//   s0' = e^{-bd}(s0 + 1)
//   s1' = e^{-bd}(s1 + d (s0 + 1))
//   s2' = e^{-bd}(s2 + 2 d s1 + d^2 (s0 + 1))
// where the +1 absorbs the event just left behind. Errors contract because
// e^{-bd} < 1.
struct Scaled {
    double s0{0.0}, s1{0.0}, s2{0.0};
};

Scaled step_over_event(const Scaled& s, double gap, double beta) {
    const double e = std::exp(-beta * gap);
    Scaled r;
    r.s0 = e * (s.s0 + 1.0);
    r.s1 = e * (s.s1 + gap * (s.s0 + 1.0));
    r.s2 = e * (s.s2 + 2.0 * gap * s.s1 + gap * gap * (s.s0 + 1.0));
    return r;
}

CoreState to_state(const Scaled& s, const Theta& theta) {
    CoreState st;
    st.x1 = theta.alpha * s.s0;
    st.x2 = theta.alpha * s.s1;
    st.x3 = theta.alpha * s.s2;
    st.lambda = theta.mu + st.x1;
    return st;
}

// f_k(u) = integral_0^u t^k e^{-t} dt; series near zero avoids the
// cancellation in 1 - e^{-u}(1 + u + ...).
double f1(double u) {
    if (u < 0.02) {
        const double u2 = u * u;
        return u2 * (0.5 + u * (-1.0 / 3.0 + u * (0.125 + u * (-1.0 / 30.0 + u / 144.0))));
    }
    return 1.0 - std::exp(-u) * (1.0 + u);
}

double f2(double u) {
    if (u < 0.02) {
        const double u3 = u * u * u;
        return u3 * (1.0 / 3.0 + u * (-0.25 + u * (0.1 + u * (-1.0 / 36.0 + u / 168.0))));
    }
    return 2.0 - std::exp(-u) * (2.0 + u * (2.0 + u));
}

}  // namespace

CoreState decay(const CoreState& state, double dt, const Theta& theta) {
    const double e = std::exp(-theta.beta * dt);
    CoreState r;
    r.x1 = e * state.x1;
    r.x2 = e * (state.x2 + dt * state.x1);
    r.x3 = e * (state.x3 + 2.0 * dt * state.x2 + dt * dt * state.x1);
    r.lambda = theta.mu + r.x1;
    return r;
}

CoreState absorb_event(const CoreState& state, const Theta& theta) {
    CoreState r = state;
    r.x1 += theta.alpha;
    r.lambda += theta.alpha;
    return r;
}

CorePath core_path(const EventSequence& events, const Theta& theta) {
    validate_theta(theta);
    validate_events(events);

    CorePath path;
    path.events = events;
    path.theta = theta;
    path.at_events.reserve(events.size());

    Scaled s;
    double prev = 0.0;
    bool any = false;
    for (double tau : events.times) {
        if (!any) {
            path.at_events.push_back(to_state(Scaled{}, theta));  // zero before first event
            any = true;
        } else {
            s = step_over_event(s, tau - prev, theta.beta);
            path.at_events.push_back(to_state(s, theta));
        }
        prev = tau;
    }
    if (any)
        path.at_horizon = to_state(step_over_event(s, events.horizon - prev, theta.beta), theta);
    else
        path.at_horizon = to_state(Scaled{}, theta);
    return path;
}

double compensator(const EventSequence& events, const Theta& theta) {
    validate_theta(theta);
    validate_events(events);
    double acc = 0.0;
    for (double tau : events.times) acc += -std::expm1(-theta.beta * (events.horizon - tau));
    return theta.mu * events.horizon + theta.alpha / theta.beta * acc;
}

std::vector<double> rescaled_interarrivals(const EventSequence& events, const Theta& theta) {
    CorePath path = core_path(events, theta);
    std::vector<double> gaps;
    gaps.reserve(events.size());
    double prev_t = 0.0;
    double prev_s0 = 0.0;  // scaled x1 just before the previous event
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double t = events.times[i];
        const double s0 = path.at_events[i].x1 / theta.alpha;
        // integral of lambda over (prev_t, t]: the jump-sum part telescopes to
        // (prev_s0 + 1{i>0}) - s0 in scaled units.
        const double carried = (i == 0) ? 0.0 : prev_s0 + 1.0;
        gaps.push_back(theta.mu * (t - prev_t) + theta.alpha / theta.beta * (carried - s0));
        prev_t = t;
        prev_s0 = s0;
    }
    return gaps;
}

namespace detail {

std::array<double, 3> kernel_integrals(const EventSequence& events, const Theta& theta) {
    const double beta = theta.beta;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    for (double tau : events.times) {
        const double u = beta * (events.horizon - tau);
        a0 += -std::expm1(-u);
        a1 += f1(u);
        a2 += f2(u);
    }
    const double b2 = beta * beta;
    return {theta.alpha * a0 / beta, theta.alpha * a1 / b2, theta.alpha * a2 / (b2 * beta)};
}

}  // namespace detail

}  // namespace hawkes
