#include "hawkes/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "hawkes/rng.hpp"

namespace hawkes {

namespace detail {

EventSequence simulate_unchecked(const Theta& theta, double horizon, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    EventSequence out;
    out.horizon = horizon;

    double t = 0.0;
    double excitation = 0.0;  // lambda_{t+} - mu, decays by exp(-beta dt)
    for (;;) {
        const double bound = theta.mu + excitation;
        const double dt = rng.exponential(bound);
        t += dt;
        if (t >= horizon) break;
        excitation *= std::exp(-theta.beta * dt);
        const double lambda_t = theta.mu + excitation;
        if (rng.uniform() * bound <= lambda_t) {
            out.times.push_back(t);
            excitation += theta.alpha;
        }
    }
    return out;
}

}  // namespace detail

EventSequence simulate(const Theta& theta, double horizon, std::uint64_t seed) {
    validate_theta_for_simulation(theta);
    if (!(std::isfinite(horizon) && horizon > 0.0))
        throw std::invalid_argument("simulate: horizon must be positive and finite");
    return detail::simulate_unchecked(theta, horizon, seed);
}

double intensity_at(const EventSequence& events, double t, const Theta& theta) {
    validate_theta(theta);
    if (!(t >= 0.0 && t <= events.horizon))
        throw std::invalid_argument("intensity_at: t must lie in [0, horizon]");
    double acc = 0.0;
    for (double tau : events.times) {
        if (tau >= t) break;
        acc += std::exp(-theta.beta * (t - tau));
    }
    return theta.mu + theta.alpha * acc;
}

}  // namespace hawkes
