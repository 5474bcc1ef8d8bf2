#include <doctest.h>

#include <cmath>
#include <vector>

#include "hawkes/edgeworth.hpp"
#include "hawkes/io.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "test_support.hpp"

using namespace hawkes;

namespace {

// phi and its derivatives by nested central differences, for the Hermite
// defining identity.
double phi3(const Vec3& z, const Mat3& sigma) { return gaussian_pdf3(z, sigma); }

double fd_partial(const std::function<double(Vec3)>& f, Vec3 z, std::span<const int> indices,
                  double h) {
    if (indices.empty()) return f(z);
    const int a = indices.front();
    const auto rest = indices.subspan(1);
    Vec3 up = z, dn = z;
    up[a] += h;
    dn[a] -= h;
    return (fd_partial(f, up, rest, h) - fd_partial(f, dn, rest, h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("edgeworth") {

TEST_CASE("collect_replication is a pass-through of the likelihood module") {
    const Theta th0{0.5, 1.0, 1.3};
    const auto ev = simulate(th0, 30.0, 606);
    const auto rs = collect_replication(ev, th0);
    const auto d = derivatives(ev, th0);
    const auto s = third_summands(ev, th0);
    for (int a = 0; a < 3; ++a)
        CHECK(rs.z1[a] == d.score[a] / std::sqrt(30.0));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(rs.hess_over_t[a][b] == d.hess[a][b] / 30.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) CHECK(rs.nu3[a][b][c] == s.nu3[a][b][c]);
    CHECK(rs.t_horizon == 30.0);

    const auto rs2 = collect_replication(ev, th0);
    CHECK(rs2.z1 == rs.z1);  // deterministic

    const auto empty = collect_replication(make_events({}, 30.0), th0);
    CHECK(empty.z1[0] == doctest::Approx(-std::sqrt(30.0)).epsilon(1e-15));
    CHECK(empty.z1[1] == 0.0);
    CHECK(empty.z1[2] == 0.0);
}

TEST_CASE("synthetic standard-normal scores: g -> I, corrections -> 0") {
    test::TestRng rng(404);
    const std::size_t reps = 20000;
    const double horizon = 100.0;
    std::vector<ReplicationStats> stats(reps);
    for (auto& rs : stats) {
        rs.t_horizon = horizon;
        for (int a = 0; a < 3; ++a) rs.z1[a] = rng.normal();
    }
    const auto c = estimate_coefficients(stats, horizon);
    const double r = static_cast<double>(reps);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double target = a == b ? 1.0 : 0.0;
            CHECK(std::fabs(c.g[a][b] - target) <= 3.0 * std::sqrt(2.0 / r));
            CHECK(c.nu_ab[a][b] == -c.g[a][b]);
        }
    // g g_inv = I to 1e-10
    const Mat3 prod = matmul(c.g, c.g_inv);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(std::fabs(prod[a][b] - (a == b ? 1.0 : 0.0)) <= 1e-10);
    // third cumulant of a symmetric law vanishes
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int cc = 0; cc < 3; ++cc)
                CHECK(std::fabs(c.kappa3[a][b][cc]) <=
                      4.0 * std::sqrt(6.0 / r) * std::sqrt(horizon));
    // with z2 = 0 and no jump sums, V and mu vanish identically
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int cc = 0; cc < 3; ++cc) {
                CHECK(c.v_coef[a][b][cc] == 0.0);
                CHECK(c.mu_coef[a][b][cc] == 0.0);
            }
}

TEST_CASE("rank-deficient replications raise degenerate information") {
    ReplicationStats a, b;
    a.t_horizon = b.t_horizon = 30.0;
    a.z1 = {1.0, 0.0, 0.0};
    b.z1 = {-1.0, 0.0, 0.0};
    std::vector<ReplicationStats> reps{a, b};
    CHECK_THROWS_WITH_AS(estimate_coefficients(reps, 30.0),
                         doctest::Contains("degenerate information"),
                         degenerate_information_error);
    reps.pop_back();
    CHECK_THROWS_AS(estimate_coefficients(reps, 30.0), degenerate_information_error);
}

TEST_CASE("third k-statistic recovers a known cumulant tensor") {
    // y = A w with w_i independent centered Exp(1): cum3(w_i) = 2, so
    // cum3(y)_{abc} = 2 sum_i A_{ai} A_{bi} A_{ci}.
    test::TestRng rng(505);
    const Mat3 a_mix{Vec3{1.0, 0.0, 0.0}, Vec3{0.5, 1.0, 0.0}, Vec3{0.2, -0.3, 0.8}};
    Tens3 truth{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int i = 0; i < 3; ++i)
                    truth[a][b][c] += 2.0 * a_mix[a][i] * a_mix[b][i] * a_mix[c][i];

    const std::size_t n = 1000000;
    const int batches = 20;
    std::vector<Vec3> all(n);
    for (auto& y : all) {
        const Vec3 w{-std::log(rng.uniform()) - 1.0, -std::log(rng.uniform()) - 1.0,
                     -std::log(rng.uniform()) - 1.0};
        y = matvec(a_mix, w);
    }
    const Tens3 k_full = third_cumulant_tensor(all);

    // batch SD estimates the estimator's standard error
    const std::size_t bs = n / batches;
    std::vector<Tens3> k_b(batches);
    for (int b = 0; b < batches; ++b)
        k_b[b] = third_cumulant_tensor(std::span<const Vec3>(all.data() + b * bs, bs));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double m = 0.0, s2 = 0.0;
                for (const auto& kb : k_b) m += kb[a][b][c];
                m /= batches;
                for (const auto& kb : k_b) s2 += (kb[a][b][c] - m) * (kb[a][b][c] - m);
                const double se_full = std::sqrt(s2 / (batches - 1)) / std::sqrt(batches);
                CHECK(std::fabs(k_full[a][b][c] - truth[a][b][c]) <= 3.0 * se_full + 1e-3);
            }
}

TEST_CASE("information cross-identity on Hawkes replications") {
    // Cov[z1] and -mean(T^{-1} hess) estimate the same matrix.
    const Theta th0{0.5, 1.0, 1.3};
    const double horizon = 30.0;
    const std::size_t reps = 3000;
    std::vector<ReplicationStats> stats(reps);
    for (std::size_t i = 0; i < reps; ++i)
        stats[i] = collect_replication(simulate(th0, horizon, derive_seed(321, i)), th0);
    const auto c = estimate_coefficients(stats, horizon);

    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double su = 0.0, sq = 0.0;
            for (const auto& rs : stats) {
                const double u = rs.z1[a] * rs.z1[b] + rs.hess_over_t[a][b];
                su += u;
                sq += u * u;
            }
            const double mean_u = su / static_cast<double>(reps);
            const double sd = std::sqrt(sq / static_cast<double>(reps) - mean_u * mean_u);
            CHECK(std::fabs(mean_u) <= 3.0 * sd / std::sqrt(static_cast<double>(reps)));
        }

    // estimated tensors keep their index symmetries
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int cc = 0; cc < 3; ++cc) {
                CHECK(c.nu_abc[a][b][cc] == c.nu_abc[b][a][cc]);
                CHECK(c.nu_abc[a][b][cc] == c.nu_abc[a][cc][b]);
                CHECK(c.kappa3[a][b][cc] ==
                      doctest::Approx(c.kappa3[b][a][cc]).epsilon(1e-12));
                CHECK(c.kappa3[a][b][cc] ==
                      doctest::Approx(c.kappa3[a][cc][b]).epsilon(1e-12));
                CHECK(c.mu_coef[a][b][cc] == c.mu_coef[a][cc][b]);
            }
}

TEST_CASE("hermite: first order, univariate embedding, symmetry") {
    const Mat3 eye = identity3();
    const Vec3 z{2.0, 0.0, 0.0};
    const int i1[] = {0};
    CHECK(hermite(z, eye, i1) == doctest::Approx(2.0).epsilon(1e-14));
    const int i3[] = {0, 0, 0};
    CHECK(hermite(z, eye, i3) == doctest::Approx(2.0).epsilon(1e-13));  // z^3 - 3z at z = 2

    test::TestRng rng(606);
    const Mat3 sigma = test::random_spd(rng, 0.5);
    const Vec3 y{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const int p1[] = {0, 1, 2}, p2[] = {2, 0, 1}, p3[] = {1, 2, 0};
    const double ref = hermite(y, sigma, p1);
    CHECK(hermite(y, sigma, p2) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(hermite(y, sigma, p3) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("hermite satisfies the Gaussian-derivative identity") {
    test::TestRng rng(707);
    const std::vector<std::vector<int>> multisets = {
        {0}, {1}, {2}, {0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2},
        {0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2}, {0, 2, 2},
        {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    for (int rep = 0; rep < 20; ++rep) {
        const Mat3 sigma = test::random_spd(rng, 0.6);
        Vec3 z;
        for (auto& v : z) v = rng.uniform(-1.5, 1.5);
        auto f = [&sigma](Vec3 x) { return phi3(x, sigma); };
        for (const auto& idx : multisets) {
            const double k = static_cast<double>(idx.size());
            const double sign = (idx.size() % 2 == 0) ? 1.0 : -1.0;
            const double h = 5e-3 * std::sqrt(sigma[idx[0]][idx[0]]);
            const double lhs = sign * fd_partial(f, z, idx, h);
            const double rhs = hermite(z, sigma, idx) * phi3(z, sigma);
            (void)k;
            CHECK(test::rel_close(lhs, rhs, 1e-4));
        }
    }
}

TEST_CASE("q_t3 with zero corrections is the Gaussian") {
    test::TestRng rng(808);
    auto c = test::random_coefficients(rng);
    c.kappa3 = Tens3{};
    c.mu_coef = Tens3{};
    for (int rep = 0; rep < 10; ++rep) {
        const Vec3 z{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(test::rel_close(q_t3(z, c), gaussian_pdf3(z, c.g_inv), 1e-12));
    }
}

TEST_CASE("q_t3 minus the Gaussian is odd") {
    test::TestRng rng(909);
    const auto c = test::random_coefficients(rng);
    const Qt3Evaluator q(c);
    for (int rep = 0; rep < 20; ++rep) {
        const Vec3 z{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Vec3 mz{-z[0], -z[1], -z[2]};
        const double corr_pos = q(z) - gaussian_pdf3(z, c.g_inv);
        const double corr_neg = q(mz) - gaussian_pdf3(mz, c.g_inv);
        CHECK(corr_pos == doctest::Approx(-corr_neg).epsilon(1e-10).scale(1e-30));
    }
}

TEST_CASE("q_t3 integrates to one") {
    test::TestRng rng(1010);
    for (int rep = 0; rep < 4; ++rep) {
        const auto c = test::random_coefficients(rng);
        const Qt3Evaluator q(c);
        const Vec3 hw{10.0 * std::sqrt(c.g_inv[0][0]), 10.0 * std::sqrt(c.g_inv[1][1]),
                      10.0 * std::sqrt(c.g_inv[2][2])};
        const double total = test::cubature3([&](const Vec3& z) { return q(z); }, hw, 5);
        CHECK(std::fabs(total - 1.0) <= 1e-6);
    }
}

TEST_CASE("closed-form marginal equals the 2-D integral of the density") {
    test::TestRng rng(1111);
    for (int rep = 0; rep < 3; ++rep) {
        const auto c = test::random_coefficients(rng);
        const Qt3Evaluator q(c);
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3, cc = (a + 2) % 3;
            const double hwb = 10.0 * std::sqrt(c.g_inv[b][b]);
            const double hwc = 10.0 * std::sqrt(c.g_inv[cc][cc]);
            for (double frac : {-1.8, -0.6, 0.0, 0.9, 2.1}) {
                const double za = frac * std::sqrt(c.g_inv[a][a]);
                const double integrated = test::cubature2_over(
                    [&](double zb, double zc) {
                        Vec3 z{};
                        z[a] = za;
                        z[b] = zb;
                        z[cc] = zc;
                        return q(z);
                    },
                    hwb, hwc, 6);
                CHECK(std::fabs(integrated - q_t3_marginal(a, za, c)) <= 1e-6);
            }
        }
    }
}

TEST_CASE("marginal integrates to one") {
    test::TestRng rng(1212);
    const auto c = test::random_coefficients(rng);
    for (int a = 0; a < 3; ++a) {
        const double hw = 10.0 * std::sqrt(c.g_inv[a][a]);
        const double total = test::gauss_legendre(
            [&](double z) { return q_t3_marginal(a, z, c); }, -hw, hw, 24);
        CHECK(std::fabs(total - 1.0) <= 1e-8);
    }
}

TEST_CASE("marginal with zero corrections is the normal density") {
    test::TestRng rng(1313);
    auto c = test::random_coefficients(rng);
    c.kappa3 = Tens3{};
    c.mu_coef = Tens3{};
    for (int a = 0; a < 3; ++a)
        for (double z : {-2.0, -0.5, 0.0, 1.0, 2.5})
            CHECK(test::rel_close(q_t3_marginal(a, z, c),
                                  gaussian_pdf1(z, c.g_inv[a][a]), 1e-13));
}

TEST_CASE("pseudo-CDF: normal limit, symmetry, monotone envelope, narrow grid") {
    test::TestRng rng(1414);
    auto zero = test::random_coefficients(rng);
    zero.kappa3 = Tens3{};
    zero.mu_coef = Tens3{};
    for (int a = 0; a < 3; ++a) {
        const double sd = std::sqrt(zero.g_inv[a][a]);
        std::vector<double> grid(4001);
        for (std::size_t i = 0; i < grid.size(); ++i)
            grid[i] = -10.0 * sd + 20.0 * sd * static_cast<double>(i) / (grid.size() - 1);
        const auto cdf = q_t3_marginal_cdf(a, grid, zero);
        CHECK(cdf.front() == 0.0);
        CHECK(cdf.back() == 1.0);
        for (std::size_t i = 0; i < grid.size(); i += 100)
            CHECK(std::fabs(cdf[i] - normal_cdf(grid[i], zero.g_inv[a][a])) <= 1e-6);
        CHECK(std::fabs(cdf[grid.size() / 2] - 0.5) <= 1e-6);  // grid center is z = 0
    }

    const auto c = test::random_coefficients(rng);
    for (int a = 0; a < 3; ++a) {
        const double sd = std::sqrt(c.g_inv[a][a]);
        std::vector<double> grid(3001);
        for (std::size_t i = 0; i < grid.size(); ++i)
            grid[i] = -10.0 * sd + 20.0 * sd * static_cast<double>(i) / (grid.size() - 1);
        const auto cdf = q_t3_marginal_cdf(a, grid, c);
        for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i] >= cdf[i - 1]);
        CHECK(cdf.front() == 0.0);
        CHECK(cdf.back() == 1.0);
        for (double v : cdf) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

        std::vector<double> narrow{-0.5 * sd, 0.0, 0.5 * sd};
        CHECK_THROWS_WITH_AS(q_t3_marginal_cdf(a, narrow, c), doctest::Contains("too narrow"),
                             std::invalid_argument);
    }
}

TEST_CASE("coefficients JSON round-trip") {
    test::TestRng rng(1515);
    const auto c = test::random_coefficients(rng);
    const std::string text = coefficients_to_json(c);
    const auto back = coefficients_from_json(text);
    CHECK(back.t_horizon == c.t_horizon);
    CHECK(back.n_replications == c.n_replications);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            CHECK(back.g[a][b] == c.g[a][b]);
            CHECK(back.g_inv[a][b] == c.g_inv[a][b]);
            for (int cc = 0; cc < 3; ++cc) {
                CHECK(back.kappa3[a][b][cc] == c.kappa3[a][b][cc]);
                CHECK(back.mu_coef[a][b][cc] == c.mu_coef[a][b][cc]);
            }
        }
    CHECK_THROWS_AS(coefficients_from_json("{not json"), io_error);
    CHECK_THROWS_AS(coefficients_from_json("{\"t_horizon\": 1}"), io_error);
}

}  // TEST_SUITE
