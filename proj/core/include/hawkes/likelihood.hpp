#pragma once

#include "hawkes/core_process.hpp"
#include "hawkes/event_sequence.hpp"
#include "hawkes/linalg3.hpp"
#include "hawkes/theta.hpp"

namespace hawkes {

// Log-likelihood with analytic derivatives through order two, parameter
// order (mu, alpha, beta). The Hessian is stored fully but built from its
// six distinct entries, so it is symmetric exactly.
struct LogLikDerivatives {
    double value{0.0};
    Vec3 score{};
    Mat3 hess{};
};

// Per-path jump-sum statistics whose expectations are the third-order
// derivative means nu_{abc}(theta0). Fully symmetric in all indices.
struct ThirdDerivSummands {
    Tens3 nu3{};
};

double loglik(const EventSequence& events, const Theta& theta);
double loglik(const CorePath& path);

LogLikDerivatives derivatives(const EventSequence& events, const Theta& theta);
LogLikDerivatives derivatives(const CorePath& path);

ThirdDerivSummands third_summands(const EventSequence& events, const Theta& theta0);
ThirdDerivSummands third_summands(const CorePath& path);

}  // namespace hawkes
