#include "hawkes/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <thread>

#include "hawkes/io.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

const std::array<std::string, 3> kParamNames{"mu", "alpha", "beta"};

namespace detail {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)  // lowest index wins: deterministic
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

namespace {

struct FitRecord {
    bool attempted{false};
    bool converged{false};
    bool boundary{false};
    bool supercritical{false};
    Theta theta_hat{};
};

void validate_config(const ExperimentConfig& c) {
    validate_theta_for_simulation(c.theta0);
    if (!(c.t_horizon > 0.0)) throw std::invalid_argument("config: t_horizon must be positive");
    if (c.mc_coeff < 10) throw std::invalid_argument("config: mc_coeff must be at least 10");
    if (c.n_rep_mle < 1) throw std::invalid_argument("config: n_rep_mle must be at least 1");
    if (c.grid_points < 16) throw std::invalid_argument("config: grid_points must be at least 16");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

// Freedman-Diaconis bin layout over the sample range.
void build_histogram(const std::vector<double>& sorted, std::vector<double>& edges,
                     std::vector<std::size_t>& counts) {
    edges.clear();
    counts.clear();
    const std::size_t n = sorted.size();
    if (n == 0) return;
    const double lo = sorted.front(), hi = sorted.back();
    const double q1 = sorted[static_cast<std::size_t>(0.25 * static_cast<double>(n - 1))];
    const double q3 = sorted[static_cast<std::size_t>(0.75 * static_cast<double>(n - 1))];
    const double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
    std::size_t bins = 1;
    if (width > 0.0 && hi > lo)
        bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
    bins = std::min<std::size_t>(bins, 10000);
    edges = linspace(lo, hi, bins + 1);
    counts.assign(bins, 0);
    for (double v : sorted) {
        std::size_t b = 0;
        if (hi > lo)
            b = std::min<std::size_t>(
                bins - 1, static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins)));
        ++counts[b];
    }
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const std::string dir = config.output_dir + "/";

    write_text_file(dir + "coeffs.json", coefficients_to_json(result.coeffs));

    std::string samples = "rep,dmu,dalpha,dbeta\n";
    for (const auto& s : result.mle_samples) {
        samples += std::to_string(s.rep);
        for (int a = 0; a < 3; ++a) {
            samples += ',';
            samples += format_g17(s.scaled_error[a]);
        }
        samples += '\n';
    }
    write_text_file(dir + "mle_samples.csv", samples);

    for (int a = 0; a < 3; ++a) {
        const auto& curve = result.density[a];
        std::string csv = "z,normal,qt3\n";
        for (std::size_t i = 0; i < curve.z.size(); ++i) {
            csv += format_g17(curve.z[i]);
            csv += ',';
            csv += format_g17(curve.normal[i]);
            csv += ',';
            csv += format_g17(curve.qt3[i]);
            csv += '\n';
        }
        write_text_file(dir + "density_" + kParamNames[a] + ".csv", csv);
    }

    auto write_qq = [&dir](const QqTable& qq, const std::string& name) {
        std::string csv = "empirical,theoretical\n";
        for (std::size_t i = 0; i < qq.empirical.size(); ++i) {
            csv += format_g17(qq.empirical[i]);
            csv += ',';
            csv += format_g17(qq.theoretical[i]);
            csv += '\n';
        }
        write_text_file(dir + name, csv);
    };
    for (int a = 0; a < 3; ++a) {
        write_qq(result.qq_normal[a], "qq_" + kParamNames[a] + "_normal.csv");
        write_qq(result.qq_qt3[a], "qq_" + kParamNames[a] + "_qt3.csv");
    }

    {
        const auto& d = result.diagnostics;
        JsonWriter w;
        w.begin_object();
        w.key("n_attempted").value(static_cast<std::uint64_t>(d.n_attempted));
        w.key("n_converged").value(static_cast<std::uint64_t>(d.n_converged));
        w.key("n_boundary").value(static_cast<std::uint64_t>(d.n_boundary));
        w.key("n_failed").value(static_cast<std::uint64_t>(d.n_failed));
        w.key("n_supercritical").value(static_cast<std::uint64_t>(d.n_supercritical));
        w.key("n_retained").value(static_cast<std::uint64_t>(d.n_retained));
        w.key("histograms").begin_object();
        for (int a = 0; a < 3; ++a) {
            w.key(kParamNames[a]).begin_object();
            w.key("edges").begin_array();
            for (double e : d.hist_edges[a]) w.value(e);
            w.end_array();
            w.key("counts").begin_array();
            for (std::size_t c : d.hist_counts[a]) w.value(static_cast<std::uint64_t>(c));
            w.end_array();
            w.end_object();
        }
        w.end_object();
        w.end_object();
        write_text_file(dir + "diagnostics.json", w.str() + "\n");
    }

    {
        // Statistical identity of the run only; execution details (workers,
        // output paths) stay out so reruns compare byte-identical.
        JsonWriter w;
        w.begin_object();
        w.key("theta0").begin_object();
        w.key("mu").value(config.theta0.mu);
        w.key("alpha").value(config.theta0.alpha);
        w.key("beta").value(config.theta0.beta);
        w.end_object();
        w.key("t_horizon").value(config.t_horizon);
        w.key("mc_coeff").value(static_cast<std::uint64_t>(config.mc_coeff));
        w.key("n_rep_mle").value(static_cast<std::uint64_t>(config.n_rep_mle));
        w.key("master_seed").value(config.master_seed);
        w.key("grid_points").value(static_cast<std::uint64_t>(config.grid_points));
        w.end_object();
        write_text_file(dir + "config.json", w.str() + "\n");
    }
}

}  // namespace

EdgeworthCoefficients estimate_coefficients_mc(const Theta& theta0, double t_horizon,
                                               std::size_t mc_coeff, std::uint64_t master_seed,
                                               std::size_t workers) {
    std::vector<ReplicationStats> stats(mc_coeff);
    detail::parallel_for(mc_coeff, workers, [&](std::size_t i) {
        const EventSequence ev = simulate(theta0, t_horizon, derive_seed(master_seed, i));
        stats[i] = collect_replication(ev, theta0);
    });
    return estimate_coefficients(stats, t_horizon);
}

ExperimentResult run(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentResult result;

    result.coeffs = estimate_coefficients_mc(config.theta0, config.t_horizon, config.mc_coeff,
                                             config.master_seed, config.workers);

    // MLE replications on a disjoint seed stream (indices after the
    // coefficient paths).
    std::vector<FitRecord> records(config.n_rep_mle);
    detail::parallel_for(config.n_rep_mle, config.workers, [&](std::size_t j) {
        const std::uint64_t seed = derive_seed(config.master_seed, config.mc_coeff + j);
        const EventSequence ev = simulate(config.theta0, config.t_horizon, seed);
        FitRecord rec;
        rec.attempted = true;
        try {
            const MleFit f = fit(ev, config.fit_options);
            rec.converged = f.converged;
            rec.boundary = f.boundary_hit;
            rec.supercritical = f.branching_ge_one;
            rec.theta_hat = f.theta_hat;
        } catch (const degenerate_likelihood_error&) {
            rec.converged = false;  // empty path: counted as a failed fit
        }
        records[j] = rec;
    });

    auto& diag = result.diagnostics;
    diag.n_attempted = config.n_rep_mle;
    const double sqrt_t = std::sqrt(config.t_horizon);
    for (std::size_t j = 0; j < records.size(); ++j) {
        const auto& rec = records[j];
        if (rec.converged) ++diag.n_converged;
        else ++diag.n_failed;
        if (rec.boundary) ++diag.n_boundary;
        if (rec.supercritical) ++diag.n_supercritical;
        if (rec.converged && !rec.boundary) {
            MleSample s;
            s.rep = j;
            s.scaled_error = {sqrt_t * (rec.theta_hat.mu - config.theta0.mu),
                              sqrt_t * (rec.theta_hat.alpha - config.theta0.alpha),
                              sqrt_t * (rec.theta_hat.beta - config.theta0.beta)};
            result.mle_samples.push_back(s);
        }
    }
    diag.n_retained = result.mle_samples.size();
    if (static_cast<double>(diag.n_failed) > 0.05 * static_cast<double>(config.n_rep_mle))
        throw fit_failure_error("experiment: more than 5% of MLE fits failed to converge (" +
                                std::to_string(diag.n_failed) + " of " +
                                std::to_string(config.n_rep_mle) + ")");

    // Density curves on +-6 marginal standard deviations around theta0
    // (z = 0); the Q-Q construction uses a wider, finer internal grid.
    for (int a = 0; a < 3; ++a) {
        const double sd = std::sqrt(result.coeffs.g_inv[a][a]);
        auto& curve = result.density[a];
        curve.z = linspace(-6.0 * sd, 6.0 * sd, config.grid_points);
        curve.normal.reserve(curve.z.size());
        curve.qt3.reserve(curve.z.size());
        for (double z : curve.z) {
            curve.normal.push_back(normal_marginal(a, z, result.coeffs));
            curve.qt3.push_back(q_t3_marginal(a, z, result.coeffs));
        }
    }

    for (int a = 0; a < 3; ++a) {
        std::vector<double> samples;
        samples.reserve(result.mle_samples.size());
        for (const auto& s : result.mle_samples) samples.push_back(s.scaled_error[a]);
        std::sort(samples.begin(), samples.end());

        build_histogram(samples, diag.hist_edges[a], diag.hist_counts[a]);
        if (samples.empty()) continue;

        const double sd = std::sqrt(result.coeffs.g_inv[a][a]);
        const std::vector<double> grid = linspace(-10.0 * sd, 10.0 * sd, 4001);
        const std::vector<double> qt3_cdf = q_t3_marginal_cdf(a, grid, result.coeffs);
        std::vector<double> norm_cdf(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            norm_cdf[i] = normal_cdf(grid[i], result.coeffs.g_inv[a][a]);

        result.qq_qt3[a] = qq_table(samples, grid, qt3_cdf);
        result.qq_normal[a] = qq_table(samples, grid, norm_cdf);
    }

    if (!config.output_dir.empty()) write_outputs(config, result);
    return result;
}

double interp_cdf(std::span<const double> grid_z, std::span<const double> grid_cdf, double x) {
    if (x <= grid_z.front()) return grid_cdf.front();
    if (x >= grid_z.back()) return grid_cdf.back();
    const auto it = std::upper_bound(grid_z.begin(), grid_z.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_z.begin());
    const double w = (x - grid_z[i - 1]) / (grid_z[i] - grid_z[i - 1]);
    return grid_cdf[i - 1] + w * (grid_cdf[i] - grid_cdf[i - 1]);
}

namespace {

double quantile_from_grid(std::span<const double> grid_z, std::span<const double> grid_cdf,
                          double p) {
    const auto it = std::lower_bound(grid_cdf.begin(), grid_cdf.end(), p);
    if (it == grid_cdf.begin()) return grid_z.front();
    if (it == grid_cdf.end()) return grid_z.back();
    const std::size_t i = static_cast<std::size_t>(it - grid_cdf.begin());
    const double df = grid_cdf[i] - grid_cdf[i - 1];
    if (df <= 1e-300) return grid_z[i];
    const double w = (p - grid_cdf[i - 1]) / df;
    return grid_z[i - 1] + w * (grid_z[i] - grid_z[i - 1]);
}

}  // namespace

QqTable qq_table(std::span<const double> samples, std::span<const double> grid_z,
                 std::span<const double> grid_cdf) {
    if (samples.empty()) throw std::invalid_argument("qq_table: need at least one sample");
    if (grid_z.size() != grid_cdf.size() || grid_z.size() < 2)
        throw std::invalid_argument("qq_table: grid and cdf sizes must match (>= 2)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    QqTable out;
    const double n = static_cast<double>(sorted.size());
    out.empirical = std::move(sorted);
    out.theoretical.reserve(out.empirical.size());
    for (std::size_t i = 0; i < out.empirical.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / n;
        out.theoretical.push_back(quantile_from_grid(grid_z, grid_cdf, p));
    }
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: need at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(f - (static_cast<double>(i) + 1.0) / n));
    }
    return d;
}

}  // namespace hawkes
