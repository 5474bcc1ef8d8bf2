#include "hawkes/mle.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/linalg3.hpp"

namespace hawkes {

namespace {

Vec3 to_vec(const Theta& t) { return {t.mu, t.alpha, t.beta}; }
Theta to_theta(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 project(const Vec3& v, const FitOptions& opts) {
    const Vec3 lo = to_vec(opts.lower), hi = to_vec(opts.upper);
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = std::clamp(v[i], lo[i], hi[i]);
    return r;
}

bool on_boundary(const Vec3& v, const FitOptions& opts) {
    const Vec3 lo = to_vec(opts.lower), hi = to_vec(opts.upper);
    for (int i = 0; i < 3; ++i) {
        const double span = hi[i] - lo[i];
        if (v[i] <= lo[i] + 1e-12 * span || v[i] >= hi[i] - 1e-12 * span) return true;
    }
    return false;
}

// Solve (-hess + damp I)[free, free] dir = score[free]; dir is zero on the
// pinned coordinates. False when the reduced matrix is not positive definite.
bool newton_direction(const LogLikDerivatives& d, const int* free_idx, int n_free, double damp,
                      Vec3& dir) {
    if (n_free == 0) return false;
    double a[3][3];
    double b[3];
    for (int r = 0; r < n_free; ++r) {
        b[r] = d.score[free_idx[r]];
        for (int c = 0; c < n_free; ++c) a[r][c] = -d.hess[free_idx[r]][free_idx[c]];
        a[r][r] += damp;
    }
    // Cholesky on the reduced system.
    double l[3][3] = {};
    for (int i = 0; i < n_free; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(sum > 0.0)) return false;
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    double y[3];
    for (int i = 0; i < n_free; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
        y[i] = s / l[i][i];
    }
    double z[3];
    for (int i = n_free; i-- > 0;) {
        double s = y[i];
        for (int k = i + 1; k < n_free; ++k) s -= l[k][i] * z[k];
        z[i] = s / l[i][i];
    }
    for (int r = 0; r < n_free; ++r) dir[free_idx[r]] = z[r];
    return true;
}

// Stationarity measure on the box: gradient components pointing out of the
// feasible set at an active bound do not count.
Vec3 projected_gradient(const Vec3& x, const Vec3& score, const FitOptions& opts) {
    const Vec3 lo = to_vec(opts.lower), hi = to_vec(opts.upper);
    Vec3 pg = score;
    for (int i = 0; i < 3; ++i) {
        const double span = hi[i] - lo[i];
        if (x[i] <= lo[i] + 1e-12 * span && pg[i] < 0.0) pg[i] = 0.0;
        if (x[i] >= hi[i] - 1e-12 * span && pg[i] > 0.0) pg[i] = 0.0;
    }
    return pg;
}

MleFit run_ascent(const EventSequence& events, Vec3 x, const FitOptions& opts) {
    MleFit fitres;
    LogLikDerivatives d = derivatives(events, to_theta(x));
    if (!std::isfinite(d.value))
        throw degenerate_likelihood_error("fit: non-finite log-likelihood at theta_init");
    fitres.loglik_trace.push_back(d.value);

    auto line_search = [&](const Vec3& dir) -> bool {
        double step = 1.0;
        for (int ls = 0; ls < opts.max_line_search; ++ls) {
            Vec3 cand{x[0] + step * dir[0], x[1] + step * dir[1], x[2] + step * dir[2]};
            cand = project(cand, opts);
            const Vec3 delta{cand[0] - x[0], cand[1] - x[1], cand[2] - x[2]};
            const double predicted = dot(d.score, delta);
            if (predicted <= 0.0) {  // projected step no longer ascending
                step *= opts.backtrack;
                continue;
            }
            const double cand_val = loglik(events, to_theta(cand));
            if (std::isfinite(cand_val) && cand_val >= d.value + opts.armijo_c * predicted) {
                x = cand;
                d = derivatives(events, to_theta(x));
                fitres.loglik_trace.push_back(d.value);
                return true;
            }
            step *= opts.backtrack;
        }
        return false;
    };

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        const Vec3 pg = projected_gradient(x, d.score, opts);
        if (max_abs(pg) <= opts.grad_tol * (1.0 + std::fabs(d.value))) {
            fitres.converged = true;
            break;
        }

        // Newton on the free subspace (coordinates with a zeroed projected
        // gradient are pinned at their bound), with diagonal damping
        // escalated until -hess is positive definite there.
        int free_idx[3];
        int n_free = 0;
        for (int i = 0; i < 3; ++i)
            if (pg[i] != 0.0) free_idx[n_free++] = i;

        bool moved = false;
        double diag_scale = 0.0;
        for (int k = 0; k < n_free; ++k)
            diag_scale = std::max(diag_scale, std::fabs(d.hess[free_idx[k]][free_idx[k]]));
        for (double damp : {0.0, 1e-8, 1e-4, 1e-2, 1.0, 1e2}) {
            Vec3 dir{0.0, 0.0, 0.0};
            if (!newton_direction(d, free_idx, n_free, damp * (diag_scale + 1.0), dir)) continue;
            if (line_search(dir)) {
                moved = true;
                break;
            }
        }
        if (!moved) {
            Vec3 dir = pg;  // projected steepest ascent fallback
            const double n = std::sqrt(dot(dir, dir));
            for (auto& v : dir) v /= n;
            moved = line_search(dir);
        }
        if (!moved) break;  // no admissible step; report current point
    }

    fitres.theta_hat = to_theta(x);
    fitres.iterations = iter;
    fitres.final_grad_norm = max_abs(projected_gradient(x, d.score, opts));
    fitres.log_likelihood = d.value;
    fitres.boundary_hit = on_boundary(x, opts);
    fitres.branching_ge_one = x[1] >= x[2];
    if (!fitres.converged)
        fitres.converged = fitres.final_grad_norm <= opts.grad_tol * (1.0 + std::fabs(d.value));
    return fitres;
}

}  // namespace

MleFit fit(const EventSequence& events, const Theta& theta_init, const FitOptions& opts) {
    validate_events(events);
    if (events.empty())
        throw degenerate_likelihood_error("fit: degenerate likelihood (empty event sequence)");
    for (int i = 0; i < 3; ++i) {
        const double lo = to_vec(opts.lower)[i], hi = to_vec(opts.upper)[i];
        if (!(lo > 0.0 && lo <= hi && std::isfinite(hi)))
            throw std::invalid_argument("fit: bounds must satisfy 0 < lower <= upper < inf");
    }

    const Vec3 x0 = project(to_vec(theta_init), opts);
    MleFit best = run_ascent(events, x0, opts);
    if (best.converged && !best.boundary_hit) return best;

    // Deterministic multiplicative restarts around the initial point.
    static constexpr double kPerturb[][3] = {
        {2.0, 0.5, 2.0}, {0.5, 1.5, 0.75}, {1.0, 0.25, 0.5}, {3.0, 1.2, 2.5}};
    const int n_restarts = std::min<int>(opts.extra_starts, 4);
    for (int k = 0; k < n_restarts; ++k) {
        Vec3 xs{x0[0] * kPerturb[k][0], x0[1] * kPerturb[k][1], x0[2] * kPerturb[k][2]};
        MleFit alt = run_ascent(events, project(xs, opts), opts);
        const bool alt_better =
            (alt.converged && !alt.boundary_hit &&
             (!(best.converged && !best.boundary_hit) || alt.log_likelihood > best.log_likelihood)) ||
            (!(best.converged && !best.boundary_hit) && alt.converged && !best.converged) ||
            (!best.converged && !alt.converged && alt.log_likelihood > best.log_likelihood);
        if (alt_better) best = alt;
        if (best.converged && !best.boundary_hit) break;
    }
    return best;
}

MleFit fit(const EventSequence& events, const FitOptions& opts) {
    validate_events(events);
    if (events.empty())
        throw degenerate_likelihood_error("fit: degenerate likelihood (empty event sequence)");
    const double n = static_cast<double>(events.size());
    Theta init{0.5 * n / events.horizon, 0.5, 1.0};
    return fit(events, init, opts);
}

}  // namespace hawkes
