#include "hawkes/edgeworth.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hawkes/io.hpp"

namespace hawkes {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// h_{abc}(z; sigma) given y = sigma^{-1} z and p = sigma^{-1}.
double h3(const Vec3& y, const Mat3& p, int a, int b, int c) {
    return y[a] * y[b] * y[c] - y[a] * p[b][c] - y[b] * p[a][c] - y[c] * p[a][b];
}

void check_coord(int coord) {
    if (coord < 0 || coord > 2) throw std::invalid_argument("coordinate index must be 0, 1 or 2");
}

}  // namespace

ReplicationStats collect_replication(const CorePath& path) {
    const double t = path.events.horizon;
    const double sqrt_t = std::sqrt(t);
    const LogLikDerivatives d = derivatives(path);

    ReplicationStats out;
    out.t_horizon = t;
    for (int a = 0; a < 3; ++a) out.z1[a] = d.score[a] / sqrt_t;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out.hess_over_t[a][b] = d.hess[a][b] / t;
    out.nu3 = third_summands(path).nu3;
    return out;
}

ReplicationStats collect_replication(const EventSequence& events, const Theta& theta0) {
    return collect_replication(core_path(events, theta0));
}

Tens3 third_cumulant_tensor(std::span<const Vec3> samples) {
    const std::size_t n = samples.size();
    if (n < 3) throw std::invalid_argument("third_cumulant_tensor: need at least 3 samples");
    Vec3 mean{};
    for (const auto& s : samples)
        for (int a = 0; a < 3; ++a) mean[a] += s[a];
    for (auto& m : mean) m /= static_cast<double>(n);

    Tens3 k{};
    for (const auto& s : samples) {
        const Vec3 c{s[0] - mean[0], s[1] - mean[1], s[2] - mean[2]};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int cidx = 0; cidx < 3; ++cidx) k[a][b][cidx] += c[a] * c[b] * c[cidx];
    }
    const double nn = static_cast<double>(n);
    const double factor = nn / ((nn - 1.0) * (nn - 2.0));  // = (n^2/((n-1)(n-2))) / n
    for (auto& m : k)
        for (auto& row : m)
            for (auto& v : row) v *= factor;
    return k;
}

EdgeworthCoefficients estimate_coefficients(std::span<const ReplicationStats> reps,
                                            double t_horizon) {
    if (!(t_horizon > 0.0)) throw std::invalid_argument("estimate_coefficients: t_horizon <= 0");
    const std::size_t n = reps.size();
    if (n < 2) throw degenerate_information_error("degenerate information: fewer than 2 replications");
    for (const auto& r : reps)
        if (std::fabs(r.t_horizon - t_horizon) > 1e-9 * t_horizon)
            throw std::invalid_argument("estimate_coefficients: replication horizon mismatch");

    const double nn = static_cast<double>(n);
    const double sqrt_t = std::sqrt(t_horizon);

    EdgeworthCoefficients out;
    out.t_horizon = t_horizon;
    out.n_replications = n;

    // Pass 1: means of the derivative statistics.
    Vec3 z1_mean{};
    Mat3 hess_mean{};
    for (const auto& r : reps) {
        for (int a = 0; a < 3; ++a) z1_mean[a] += r.z1[a];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) hess_mean[a][b] += r.hess_over_t[a][b];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) out.nu_abc[a][b][c] += r.nu3[a][b][c];
    }
    for (auto& v : z1_mean) v /= nn;
    for (auto& row : hess_mean)
        for (auto& v : row) v /= nn;
    for (auto& m : out.nu_abc)
        for (auto& row : m)
            for (auto& v : row) v /= nn;

    // Information matrix from the unbiased covariance of z1.
    Mat3 g{};
    for (const auto& r : reps) {
        const Vec3 c{r.z1[0] - z1_mean[0], r.z1[1] - z1_mean[1], r.z1[2] - z1_mean[2]};
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) g[a][b] += c[a] * c[b];
    }
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            g[a][b] /= (nn - 1.0);
            g[b][a] = g[a][b];
        }
    if (!cholesky3(g))
        throw degenerate_information_error(
            "degenerate information: covariance of the score is not positive definite");
    out.g = g;
    out.g_inv = spd_inverse(g);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out.nu_ab[a][b] = -g[a][b];

    // Third cumulant of the normalized score g^{-1} z1, scaled by sqrt(T).
    std::vector<Vec3> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = matvec(out.g_inv, reps[i].z1);
    out.kappa3 = third_cumulant_tensor(y);
    for (auto& m : out.kappa3)
        for (auto& row : m)
            for (auto& v : row) v *= sqrt_t;

    // Pass 2: V^a_{bc} = Cov[Z^a_b, Z^{a1}] g_{a1 c} = Cov[(g^{-1} z2)_{ab}, z1_c]
    // after contracting g through the bilinear covariance. The centering
    // constant nu_ab drops out of the covariance, so the pass-1 Monte-Carlo
    // mean of the Hessian is used only to define z2 itself.
    Vec3 y_mean{};
    for (const auto& yi : y)
        for (int a = 0; a < 3; ++a) y_mean[a] += yi[a];
    for (auto& v : y_mean) v /= nn;

    Mat3 zab_mean{};
    std::vector<Mat3> zab(n);
    for (std::size_t i = 0; i < n; ++i) {
        Mat3 z2{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                z2[a][b] = sqrt_t * (reps[i].hess_over_t[a][b] - hess_mean[a][b]);
        zab[i] = matmul(out.g_inv, z2);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) zab_mean[a][b] += zab[i][a][b];
    }
    for (auto& row : zab_mean)
        for (auto& v : row) v /= nn;

    Tens3 cov_zab_y{};  // Cov[Z^a_b, y_{a1}]
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double dz = zab[i][a][b] - zab_mean[a][b];
                for (int a1 = 0; a1 < 3; ++a1)
                    cov_zab_y[a][b][a1] += dz * (y[i][a1] - y_mean[a1]);
            }
    }
    for (auto& m : cov_zab_y)
        for (auto& row : m)
            for (auto& v : row) v /= (nn - 1.0);

    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int a1 = 0; a1 < 3; ++a1) acc += cov_zab_y[a][b][a1] * g[a1][c];
                out.v_coef[a][b][c] = acc;
            }

    // mu^a_{a1 a2} = (V^a_{a1 a2} + V^a_{a2 a1} + g^{ab} nu_{b a1 a2}) / 2.
    for (int a = 0; a < 3; ++a)
        for (int a1 = 0; a1 < 3; ++a1)
            for (int a2 = 0; a2 < 3; ++a2) {
                double nu_up = 0.0;
                for (int b = 0; b < 3; ++b) nu_up += out.g_inv[a][b] * out.nu_abc[b][a1][a2];
                out.mu_coef[a][a1][a2] =
                    0.5 * (out.v_coef[a][a1][a2] + out.v_coef[a][a2][a1] + nu_up);
            }
    return out;
}

double hermite(const Vec3& z, const Mat3& sigma, std::span<const int> indices) {
    if (indices.empty() || indices.size() > 3)
        throw std::invalid_argument("hermite: supported orders are 1..3");
    for (int idx : indices) check_coord(idx);
    const Mat3 p = spd_inverse(sigma);
    const Vec3 y = matvec(p, z);
    switch (indices.size()) {
        case 1:
            return y[indices[0]];
        case 2:
            return y[indices[0]] * y[indices[1]] - p[indices[0]][indices[1]];
        default:
            return h3(y, p, indices[0], indices[1], indices[2]);
    }
}

Qt3Evaluator::Qt3Evaluator(const EdgeworthCoefficients& coeffs) : g_(coeffs.g) {
    auto l = cholesky3(coeffs.g);
    if (!l) throw std::invalid_argument("q_t3: information matrix not positive definite");
    const double det_sqrt = (*l)[0][0] * (*l)[1][1] * (*l)[2][2];
    norm_const_ = det_sqrt / std::pow(kTwoPi, 1.5);
    inv_sqrt_t_ = 1.0 / std::sqrt(coeffs.t_horizon);

    // c3_{a1 a2 a3} = kappa3^{a1 a2 a3} / 6 + mu^{a3}_{b1 b2} g^{b1 a1} g^{b2 a2};
    // c1_{a1} = mu^{a1}_{b1 b2} g^{b1 b2}  (g^{..} = entries of g^{-1}).
    const Mat3& gi = coeffs.g_inv;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int a2 = 0; a2 < 3; ++a2)
            for (int a3 = 0; a3 < 3; ++a3) {
                double acc = coeffs.kappa3[a1][a2][a3] / 6.0;
                for (int b1 = 0; b1 < 3; ++b1)
                    for (int b2 = 0; b2 < 3; ++b2)
                        acc += coeffs.mu_coef[a3][b1][b2] * gi[b1][a1] * gi[b2][a2];
                c3_[a1][a2][a3] = acc;
            }
    for (int a1 = 0; a1 < 3; ++a1) {
        double acc = 0.0;
        for (int b1 = 0; b1 < 3; ++b1)
            for (int b2 = 0; b2 < 3; ++b2) acc += coeffs.mu_coef[a1][b1][b2] * gi[b1][b2];
        c1_[a1] = acc;
    }
}

double Qt3Evaluator::operator()(const Vec3& z) const {
    // phi(z; g^{-1}) has precision matrix g, so sigma^{-1} z = g z.
    const Vec3 y = matvec(g_, z);
    const double phi = norm_const_ * std::exp(-0.5 * dot(z, y));

    double poly = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) poly += c3_[a][b][c] * h3(y, g_, a, b, c);
    for (int a = 0; a < 3; ++a) poly += c1_[a] * y[a];
    return phi * (1.0 + inv_sqrt_t_ * poly);
}

double q_t3(const Vec3& z, const EdgeworthCoefficients& coeffs) {
    return Qt3Evaluator(coeffs)(z);
}

double q_t3_marginal(int coord, double z, const EdgeworthCoefficients& coeffs) {
    check_coord(coord);
    const int a = coord;
    const double s = coeffs.g_inv[a][a];
    double c3 = coeffs.kappa3[a][a][a] / 6.0;
    for (int b1 = 0; b1 < 3; ++b1)
        for (int b2 = 0; b2 < 3; ++b2)
            c3 += coeffs.mu_coef[a][b1][b2] * coeffs.g_inv[b1][a] * coeffs.g_inv[b2][a];
    double c1 = 0.0;
    for (int b1 = 0; b1 < 3; ++b1)
        for (int b2 = 0; b2 < 3; ++b2) c1 += coeffs.mu_coef[a][b1][b2] * coeffs.g_inv[b1][b2];

    const double h1 = z / s;
    const double h3u = (z * z * z) / (s * s * s) - 3.0 * z / (s * s);
    const double corr = (c3 * h3u + c1 * h1) / std::sqrt(coeffs.t_horizon);
    return gaussian_pdf1(z, s) * (1.0 + corr);
}

double normal_marginal(int coord, double z, const EdgeworthCoefficients& coeffs) {
    check_coord(coord);
    return gaussian_pdf1(z, coeffs.g_inv[coord][coord]);
}

std::vector<double> q_t3_marginal_cdf(int coord, std::span<const double> grid,
                                      const EdgeworthCoefficients& coeffs) {
    check_coord(coord);
    if (grid.size() < 2) throw std::invalid_argument("q_t3_marginal_cdf: need at least 2 grid points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("q_t3_marginal_cdf: grid must be strictly increasing");

    std::vector<double> cdf(grid.size(), 0.0);
    double prev_pdf = q_t3_marginal(coord, grid[0], coeffs);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double pdf = q_t3_marginal(coord, grid[i], coeffs);
        cdf[i] = cdf[i - 1] + 0.5 * (pdf + prev_pdf) * (grid[i] - grid[i - 1]);
        prev_pdf = pdf;
    }
    if (cdf.back() < 0.999)
        throw std::invalid_argument(
            "q_t3_marginal_cdf: grid too narrow (cumulative mass " + format_g17(cdf.back()) + ")");

    double running = 0.0;
    for (auto& v : cdf) {
        running = std::max(running, v);
        v = std::min(running, 1.0);
    }
    cdf.front() = 0.0;
    cdf.back() = 1.0;
    return cdf;
}

std::string coefficients_to_json(const EdgeworthCoefficients& coeffs) {
    JsonWriter w;
    auto mat = [&w](const Mat3& m) {
        w.begin_array();
        for (const auto& row : m) {
            w.begin_array();
            for (double v : row) w.value(v);
            w.end_array();
        }
        w.end_array();
    };
    auto tens = [&w](const Tens3& t) {
        w.begin_array();
        for (const auto& m : t) {
            w.begin_array();
            for (const auto& row : m) {
                w.begin_array();
                for (double v : row) w.value(v);
                w.end_array();
            }
            w.end_array();
        }
        w.end_array();
    };
    w.begin_object();
    w.key("t_horizon").value(coeffs.t_horizon);
    w.key("n_replications").value(static_cast<std::uint64_t>(coeffs.n_replications));
    w.key("g");
    mat(coeffs.g);
    w.key("g_inv");
    mat(coeffs.g_inv);
    w.key("nu_ab");
    mat(coeffs.nu_ab);
    w.key("nu_abc");
    tens(coeffs.nu_abc);
    w.key("kappa3");
    tens(coeffs.kappa3);
    w.key("v_coef");
    tens(coeffs.v_coef);
    w.key("mu_coef");
    tens(coeffs.mu_coef);
    w.end_object();
    return w.str() + "\n";
}

EdgeworthCoefficients coefficients_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(std::string("coefficients JSON: ") + e.what());
    }
    try {
        EdgeworthCoefficients c;
        c.t_horizon = j.at("t_horizon").get<double>();
        c.n_replications = j.at("n_replications").get<std::size_t>();
        auto mat = [&j](const char* k, Mat3& m) {
            const auto& a = j.at(k);
            for (int i = 0; i < 3; ++i)
                for (int jj = 0; jj < 3; ++jj) m[i][jj] = a.at(i).at(jj).get<double>();
        };
        auto tens = [&j](const char* k, Tens3& t) {
            const auto& a = j.at(k);
            for (int i = 0; i < 3; ++i)
                for (int jj = 0; jj < 3; ++jj)
                    for (int kk = 0; kk < 3; ++kk) t[i][jj][kk] = a.at(i).at(jj).at(kk).get<double>();
        };
        mat("g", c.g);
        mat("g_inv", c.g_inv);
        mat("nu_ab", c.nu_ab);
        tens("nu_abc", c.nu_abc);
        tens("kappa3", c.kappa3);
        tens("v_coef", c.v_coef);
        tens("mu_coef", c.mu_coef);
        if (!(c.t_horizon > 0.0)) throw io_error("coefficients JSON: t_horizon must be positive");
        if (!cholesky3(c.g)) throw io_error("coefficients JSON: g is not positive definite");
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("coefficients JSON: ") + e.what());
    }
}

}  // namespace hawkes
