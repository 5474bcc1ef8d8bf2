#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace hawkes {

// Parameters of the exponential self-exciting intensity
//   lambda_t = mu + sum_{tau_j < t} alpha * exp(-beta * (t - tau_j)).
struct Theta {
    double mu{0.0};     // baseline intensity, events per unit time
    double alpha{0.0};  // intensity jump at each event
    double beta{0.0};   // exponential decay rate, 1 / time

    double branching_ratio() const { return alpha / beta; }

    bool is_valid() const {
        return std::isfinite(mu) && std::isfinite(alpha) && std::isfinite(beta) &&
               mu > 0.0 && alpha > 0.0 && beta > 0.0;
    }
};

inline void validate_theta(const Theta& theta) {
    if (!theta.is_valid())
        throw std::invalid_argument("theta: mu, alpha, beta must be positive and finite");
}

// Simulation additionally needs subcriticality alpha/beta < 1; otherwise the
// cluster cascade can explode on a finite horizon.
inline void validate_theta_for_simulation(const Theta& theta) {
    validate_theta(theta);
    if (theta.alpha >= theta.beta)
        throw std::invalid_argument("theta: simulation requires alpha < beta (branching ratio < 1)");
}

}  // namespace hawkes
