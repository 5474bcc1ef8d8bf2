#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hawkes/edgeworth.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/theta.hpp"

namespace hawkes {

// More than 5% of the MLE replications failed to converge.
struct fit_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

extern const std::array<std::string, 3> kParamNames;  // {"mu", "alpha", "beta"}

struct ExperimentConfig {
    Theta theta0{0.5, 1.0, 1.3};
    double t_horizon{30.0};
    std::size_t mc_coeff{5000};   // replications for coefficient estimation
    std::size_t n_rep_mle{3000};  // MLE replications
    std::uint64_t master_seed{1};
    std::string output_dir{};  // empty: keep results in memory only
    std::size_t grid_points{512};
    std::size_t workers{0};  // 0: hardware concurrency
    FitOptions fit_options{};
};

struct MleSample {
    std::size_t rep;     // MLE replication index (gaps mark excluded fits)
    Vec3 scaled_error;   // sqrt(T) (theta_hat - theta0)
};

struct DensityCurve {
    std::vector<double> z, normal, qt3;
};

struct QqTable {
    std::vector<double> empirical, theoretical;
};

struct ExperimentDiagnostics {
    std::size_t n_attempted{0};
    std::size_t n_converged{0};
    std::size_t n_boundary{0};
    std::size_t n_failed{0};
    std::size_t n_supercritical{0};
    std::size_t n_retained{0};
    std::array<std::vector<double>, 3> hist_edges;        // Freedman-Diaconis bins
    std::array<std::vector<std::size_t>, 3> hist_counts;  // of the retained samples
};

struct ExperimentResult {
    EdgeworthCoefficients coeffs;
    std::vector<MleSample> mle_samples;  // converged interior fits only
    std::array<DensityCurve, 3> density;
    std::array<QqTable, 3> qq_normal;
    std::array<QqTable, 3> qq_qt3;
    ExperimentDiagnostics diagnostics;
};

// Full pipeline: simulate mc_coeff paths for the expansion coefficients,
// fit n_rep_mle more paths (disjoint seed streams, seeds derived from
// (master_seed, replication index)), emit density and Q-Q datasets. Results
// are bit-identical for any worker count. Writes the output files when
// output_dir is set.
ExperimentResult run(const ExperimentConfig& config);

// Coefficient phase alone, seed stream identical to run()'s first phase.
EdgeworthCoefficients estimate_coefficients_mc(const Theta& theta0, double t_horizon,
                                               std::size_t mc_coeff, std::uint64_t master_seed,
                                               std::size_t workers);

// Order statistic x_(i) paired with the reference quantile at level
// (i - 0.5)/n, by numerical inversion of the CDF sampled on grid_z.
QqTable qq_table(std::span<const double> samples, std::span<const double> grid_z,
                 std::span<const double> grid_cdf);

// Linear interpolation of a grid CDF (clamped to [0, 1] outside the grid).
double interp_cdf(std::span<const double> grid_z, std::span<const double> grid_cdf, double x);

// Kolmogorov-Smirnov distance between samples and a reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

namespace detail {
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);
}

}  // namespace hawkes
