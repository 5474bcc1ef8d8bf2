#pragma once

// Fixed-size linear algebra for the three-parameter model (mu, alpha, beta).
// Parameter index convention throughout the library: 0 = mu, 1 = alpha, 2 = beta.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

namespace hawkes {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;
using Tens3 = std::array<Mat3, 3>;

inline constexpr Mat3 identity3() {
    return Mat3{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};
}

inline Vec3 matvec(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (std::size_t i = 0; i < 3; ++i)
        r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return r;
}

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double max_abs(const Vec3& v) {
    return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])});
}

// Lower-triangular Cholesky factor of a symmetric matrix; empty if not
// numerically positive definite.
inline std::optional<Mat3> cholesky3(const Mat3& s) {
    Mat3 l{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = s[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(sum > 0.0)) return std::nullopt;
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    return l;
}

// Solve L y = b (forward), then L' x = y (backward).
inline Vec3 cholesky_solve(const Mat3& l, const Vec3& b) {
    Vec3 y{};
    for (std::size_t i = 0; i < 3; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * y[k];
        y[i] = s / l[i][i];
    }
    Vec3 x{};
    for (std::size_t ii = 3; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < 3; ++k) s -= l[k][ii] * x[k];
        x[ii] = s / l[ii][ii];
    }
    return x;
}

inline Mat3 spd_inverse(const Mat3& s) {
    auto l = cholesky3(s);
    if (!l) throw std::invalid_argument("spd_inverse: matrix not positive definite");
    Mat3 inv{};
    for (std::size_t j = 0; j < 3; ++j) {
        Vec3 e{};
        e[j] = 1.0;
        Vec3 col = cholesky_solve(*l, e);
        for (std::size_t i = 0; i < 3; ++i) inv[i][j] = col[i];
    }
    // Symmetrize against rounding.
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            double v = 0.5 * (inv[i][j] + inv[j][i]);
            inv[i][j] = inv[j][i] = v;
        }
    return inv;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline Vec3 sym_eigenvalues3(Mat3 a) {
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
        if (off < 1e-15 * (1.0 + std::fabs(a[0][0]) + std::fabs(a[1][1]) + std::fabs(a[2][2])))
            break;
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Mat3 r = identity3();
                r[p][p] = c; r[q][q] = c; r[p][q] = s; r[q][p] = -s;
                Mat3 rt = r;
                rt[p][q] = -s; rt[q][p] = s;
                a = matmul(rt, matmul(a, r));
            }
        }
    }
    Vec3 ev{a[0][0], a[1][1], a[2][2]};
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    return ev;
}

// N(0, sigma) density via the triangular factor of sigma; the determinant
// comes from the factor's diagonal.
inline double gaussian_pdf3(const Vec3& z, const Mat3& sigma) {
    auto l = cholesky3(sigma);
    if (!l) throw std::invalid_argument("gaussian_pdf3: sigma not positive definite");
    Vec3 y{};
    for (std::size_t i = 0; i < 3; ++i) {
        double s = z[i];
        for (std::size_t k = 0; k < i; ++k) s -= (*l)[i][k] * y[k];
        y[i] = s / (*l)[i][i];
    }
    const double det_sqrt = (*l)[0][0] * (*l)[1][1] * (*l)[2][2];
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::exp(-0.5 * dot(y, y)) / (det_sqrt * std::pow(two_pi, 1.5));
}

inline double gaussian_pdf1(double z, double var) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::exp(-0.5 * z * z / var) / std::sqrt(two_pi * var);
}

inline double normal_cdf(double z, double var) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0 * var));
}

}  // namespace hawkes
