#include "hawkes/likelihood.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

void require_positive_mu_alpha(const Theta& theta) {
    validate_theta(theta);  // alpha > 0 needed: the alpha-derivatives divide by it
}

}  // namespace

double loglik(const CorePath& path) {
    const auto ints = detail::kernel_integrals(path.events, path.theta);
    double jump = 0.0;
    for (const auto& st : path.at_events) jump += std::log(st.lambda);
    return jump - path.theta.mu * path.events.horizon - ints[0];
}

double loglik(const EventSequence& events, const Theta& theta) {
    require_positive_mu_alpha(theta);
    return loglik(core_path(events, theta));
}

// Direct pathwise derivatives of
//   l(theta) = sum_i log lambda_i - mu T - integral X^(1)
// using d(lambda)/d(mu, alpha, beta) = (1, x1/alpha, -x2) and
// d(x1)/dbeta = -x2, d(x2)/dbeta = -x3, d(integral X^(k))/dbeta = -integral X^(k+1).
// Every compensator-side term reduces to the closed-form kernel integrals;
// no quadrature is involved.
LogLikDerivatives derivatives(const CorePath& path) {
    const Theta& theta = path.theta;
    const double t_horizon = path.events.horizon;
    const double alpha = theta.alpha;
    const auto ints = detail::kernel_integrals(path.events, theta);

    double sum_log = 0.0;
    double s_inv = 0.0, s_x1 = 0.0, s_x2 = 0.0;       // f / lambda sums
    double q_inv = 0.0, q_x1 = 0.0, q_x2 = 0.0;       // f / lambda^2 sums
    double q_x1x1 = 0.0, q_33 = 0.0;
    for (const auto& st : path.at_events) {
        const double l = st.lambda;
        const double l2 = l * l;
        sum_log += std::log(l);
        s_inv += 1.0 / l;
        s_x1 += st.x1 / l;
        s_x2 += st.x2 / l;
        q_inv += 1.0 / l2;
        q_x1 += st.x1 / l2;
        q_x2 += st.x2 / l2;
        q_x1x1 += st.x1 * st.x1 / l2;
        q_33 += (st.x3 * l - st.x2 * st.x2) / l2;
    }

    LogLikDerivatives out;
    out.value = sum_log - theta.mu * t_horizon - ints[0];
    out.score[0] = s_inv - t_horizon;
    out.score[1] = (s_x1 - ints[0]) / alpha;
    out.score[2] = -s_x2 + ints[1];

    const double h00 = -q_inv;
    const double h01 = -q_x1 / alpha;
    const double h02 = q_x2;
    const double h11 = -q_x1x1 / (alpha * alpha);
    const double h12 = (-theta.mu * q_x2 + ints[1]) / alpha;
    const double h22 = q_33 - ints[2];
    out.hess = Mat3{Vec3{h00, h01, h02}, Vec3{h01, h11, h12}, Vec3{h02, h12, h22}};
    return out;
}

LogLikDerivatives derivatives(const EventSequence& events, const Theta& theta) {
    require_positive_mu_alpha(theta);
    return derivatives(core_path(events, theta));
}

ThirdDerivSummands third_summands(const CorePath& path) {
    const Theta& theta = path.theta;
    const double mu = theta.mu;
    const double a = theta.alpha;

    double s111 = 0.0, s112 = 0.0, s113 = 0.0, s221 = 0.0, s222 = 0.0;
    double s223 = 0.0, s331 = 0.0, s332 = 0.0, s333 = 0.0, s123 = 0.0;
    for (const auto& st : path.at_events) {
        const double l = st.lambda;
        const double l3 = l * l * l;
        const double x1 = st.x1, x2 = st.x2, x3 = st.x3;
        s111 += 2.0 / l3;
        s112 += 2.0 * x1 / (a * l3);
        s113 += -2.0 * x2 / l3;
        s221 += 2.0 * x1 * x1 / (a * a * l3);
        s222 += 2.0 * x1 * x1 * x1 / (a * a * a * l3);
        s223 += 2.0 * mu * x1 * x2 / (a * a * l3);
        s331 += (2.0 * x2 * x2 - x3 * l) / l3;
        s332 += (-x1 * x3 * l - 2.0 * mu * x2 * x2) / (a * l3);
        s333 += (3.0 * x2 * x3 * l - 2.0 * x2 * x2 * x2) / l3;
        s123 += x2 * (mu - x1) / (a * l3);
    }

    const double inv_t = 1.0 / path.events.horizon;
    ThirdDerivSummands out;
    auto set = [&](int a1, int a2, int a3, double v) {
        v *= inv_t;
        out.nu3[a1][a2][a3] = v;
        out.nu3[a1][a3][a2] = v;
        out.nu3[a2][a1][a3] = v;
        out.nu3[a2][a3][a1] = v;
        out.nu3[a3][a1][a2] = v;
        out.nu3[a3][a2][a1] = v;
    };
    set(0, 0, 0, s111);
    set(0, 0, 1, s112);
    set(0, 0, 2, s113);
    set(1, 1, 0, s221);
    set(1, 1, 1, s222);
    set(1, 1, 2, s223);
    set(2, 2, 0, s331);
    set(2, 2, 1, s332);
    set(2, 2, 2, s333);
    set(0, 1, 2, s123);
    return out;
}

ThirdDerivSummands third_summands(const EventSequence& events, const Theta& theta0) {
    require_positive_mu_alpha(theta0);
    return third_summands(core_path(events, theta0));
}

}  // namespace hawkes
