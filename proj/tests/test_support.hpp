#pragma once

// Shared oracles for the test suites: definition-level O(n^2) evaluation of
// the core processes and likelihood, quadrature, finite differences, and a
// KS test. Everything here is independent of the library's recursion path.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hawkes/edgeworth.hpp"
#include "hawkes/event_sequence.hpp"
#include "hawkes/linalg3.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/theta.hpp"

namespace hawkes::test {

class TestRng {
  public:
    explicit TestRng(std::uint64_t seed) : rng_(seed) {}
    double uniform() { return rng_.uniform(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
    double normal();
    std::uint64_t next_u64() { return rng_.next(); }

  private:
    Xoshiro256pp rng_;
    bool has_spare_{false};
    double spare_{0.0};
};

struct NaiveState {
    double lambda, x1, x2, x3;
};

struct NaiveDerivs {
    double value;
    std::array<double, 3> score;
    double hess[3][3];
};

// Double-sum definition of the core processes at the left limit of t.
NaiveState naive_state_at(std::span<const double> times, double t, const Theta& theta);
std::vector<NaiveState> naive_states_at_events(const EventSequence& events, const Theta& theta);

// Likelihood and derivatives from the naive states, accumulated in long
// double with locally implemented kernel primitives.
NaiveDerivs naive_derivatives(const EventSequence& events, const Theta& theta);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// Composite 16-node Gauss-Legendre.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);

// One-sample KS p-value against a continuous CDF.
double ks_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf);

inline bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Theta random_theta(TestRng& rng);  // components in [0.1, 2], alpha <= 0.95 beta

// Simulated path under a random theta, horizon scaled for roughly
// target_events points.
struct RandomPath {
    EventSequence events;
    Theta theta;
};
RandomPath random_path(TestRng& rng, std::size_t target_events);

// Central finite differences of the log-likelihood / score in theta, with
// per-component step h = rel_h * (1 + |theta_a|).
std::array<double, 3> fd_score(const EventSequence& events, const Theta& theta, double rel_h);
Mat3 fd_hessian(const EventSequence& events, const Theta& theta, double rel_h);

Mat3 random_spd(TestRng& rng, double diag_boost);
EdgeworthCoefficients random_coefficients(TestRng& rng);

// integral of f over the box prod_a [-half_width[a], half_width[a]],
// composite Gauss-Legendre with `panels` panels per axis.
double cubature3(const std::function<double(const Vec3&)>& f, const Vec3& half_width, int panels);
double cubature2_over(const std::function<double(double, double)>& f, double hw1, double hw2,
                      int panels);

}  // namespace hawkes::test
