#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/core_process.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/linalg3.hpp"

namespace hawkes {

// The estimated information matrix is not positive definite: too few or
// pathological replications.
struct degenerate_information_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normalized derivative statistics at theta0:
//   z1_a  = T^{-1/2} l_a,    z2_ab = sqrt(T) (T^{-1} l_ab - nu_ab).
struct ZStats {
    Vec3 z1{};
    Mat3 z2{};
};

// Raw per-path ingredients; expectations are taken only in
// estimate_coefficients.
struct ReplicationStats {
    Vec3 z1{};
    Mat3 hess_over_t{};
    Tens3 nu3{};
    double t_horizon{0.0};
};

// Everything the second-order density needs. Tensor layout is
// [a][a1][a2] with the parameter order (mu, alpha, beta).
struct EdgeworthCoefficients {
    Mat3 g{};         // information matrix, from Var[z1]
    Mat3 g_inv{};
    Mat3 nu_ab{};     // = -g
    Tens3 nu_abc{};   // Monte-Carlo mean of the third-derivative jump sums
    Tens3 kappa3{};   // sqrt(T) * third cumulant of g^{-1} z1
    Tens3 v_coef{};   // V^a_{bc} = Cov[Z^a_b, Z^{a1}] g_{a1 c}
    Tens3 mu_coef{};  // (V^a_{a1a2} + V^a_{a2a1} + g^{ab} nu_{b a1 a2}) / 2
    double t_horizon{0.0};
    std::size_t n_replications{0};
};

ReplicationStats collect_replication(const EventSequence& events, const Theta& theta0);
ReplicationStats collect_replication(const CorePath& path);

// Two passes over the replications: means of the second/third derivative
// statistics first, then the covariance-based quantities. The reduction is a
// single index-ordered loop, so the result does not depend on how the
// replications were produced.
EdgeworthCoefficients estimate_coefficients(std::span<const ReplicationStats> reps,
                                            double t_horizon);

// Bias-corrected third k-statistic: R^2 / ((R-1)(R-2)) * mean of centered
// triple products. Needs at least 3 samples.
Tens3 third_cumulant_tensor(std::span<const Vec3> samples);

// h_{a1..ak}(z; sigma) = (-1)^k (d^k phi / dz_{a1}..dz_{ak}) / phi for the
// N(0, sigma) density; k = indices.size() in 1..3, indices are 0-based.
double hermite(const Vec3& z, const Mat3& sigma, std::span<const int> indices);

// Second-order density approximation of sqrt(T)(theta_hat - theta0). A
// signed density: may dip below zero in the tails.
double q_t3(const Vec3& z, const EdgeworthCoefficients& coeffs);

// Precomputed contractions for grid/cubature evaluation.
class Qt3Evaluator {
  public:
    explicit Qt3Evaluator(const EdgeworthCoefficients& coeffs);
    double operator()(const Vec3& z) const;

  private:
    Mat3 g_;
    Tens3 c3_{};  // coefficient of h_{a1 a2 a3}
    Vec3 c1_{};   // coefficient of h_{a1}
    double norm_const_{0.0};
    double inv_sqrt_t_{0.0};
};

// Closed-form marginal in coordinate `coord`: only the all-equal-index
// Hermite terms survive integration of the other two coordinates.
double q_t3_marginal(int coord, double z, const EdgeworthCoefficients& coeffs);

// Leading-order reference: N(0, (g^{-1})_{aa}) density.
double normal_marginal(int coord, double z, const EdgeworthCoefficients& coeffs);

// Pseudo-CDF on the given grid: trapezoid integration, monotone envelope,
// clipped to [0, 1], endpoints forced to 0 and 1. Throws when the grid is too
// narrow (raw mass at the right end below 0.999).
std::vector<double> q_t3_marginal_cdf(int coord, std::span<const double> grid,
                                      const EdgeworthCoefficients& coeffs);

std::string coefficients_to_json(const EdgeworthCoefficients& coeffs);
EdgeworthCoefficients coefficients_from_json(const std::string& text);

}  // namespace hawkes
