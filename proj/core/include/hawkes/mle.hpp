#pragma once

#include <stdexcept>
#include <vector>

#include "hawkes/event_sequence.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/theta.hpp"

namespace hawkes {

// No interior maximizer exists (e.g. an empty path, where the likelihood is
// monotone decreasing in mu and carries no alpha/beta information).
struct degenerate_likelihood_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitOptions {
    Theta lower{1e-6, 1e-6, 1e-6};
    Theta upper{50.0, 50.0, 50.0};
    double grad_tol{1e-8};  // converged when ||score||_inf <= grad_tol * (1 + |loglik|)
    int max_iterations{200};
    double armijo_c{1e-4};
    double backtrack{0.5};
    int max_line_search{60};
    int extra_starts{4};  // perturbed restarts when the first start fails
};

struct MleFit {
    Theta theta_hat{};
    bool converged{false};
    int iterations{0};
    double final_grad_norm{0.0};
    bool boundary_hit{false};
    bool branching_ge_one{false};  // alpha/beta >= 1 at the fit; kept, flagged
    double log_likelihood{0.0};
    std::vector<double> loglik_trace;  // accepted values, nondecreasing
};

// Safeguarded Newton ascent on the box [lower, upper]: Newton direction when
// -hess is positive definite, steepest ascent otherwise, Armijo backtracking,
// projection onto the box. Deterministic in its inputs.
MleFit fit(const EventSequence& events, const Theta& theta_init, const FitOptions& opts = {});

// Moment-flavored default start: mu = 0.5 n / T, beta = 1, alpha = 0.5 beta.
MleFit fit(const EventSequence& events, const FitOptions& opts = {});

}  // namespace hawkes
