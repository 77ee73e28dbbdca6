// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/wishart.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wishtrack {

namespace {

constexpr double kClampTol = 1e-6;
constexpr double kTailTarget = 1e-10;
constexpr double kShift = -0.5;  // c_m = c_n

// t^z e^{-t}
double g(double z, double t) {
    if (std::isinf(t) || t == 0.0) return 0.0;
    return std::exp(z * std::log(t) - t);
}

struct Centering {
    double mu;
    double sigma;
};

Centering centering_max(const WishartLaw& law) {
    const double sm = std::sqrt(law.m() + kShift), sn = std::sqrt(law.n() + kShift);
    const double mu = (sm + sn) * (sm + sn);
    return {mu, std::sqrt(mu) * std::cbrt(1.0 / sm + 1.0 / sn)};
}

Centering centering_min(const WishartLaw& law) {
    const double sm = std::sqrt(law.m() + kShift), sn = std::sqrt(law.n() + kShift);
    const double mu = (sn - sm) * (sn - sm);
    return {mu, std::sqrt(mu) * std::cbrt(1.0 / sm - 1.0 / sn)};
}

double lower_reg_gamma(double z, double x) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(z, x); }

// Doubles the cap until the tail drops below the target.
double find_cap(const std::function<double(double)>& tail, double start) {
    double cap = std::max(start, 1.0);
    while (tail(cap) >= kTailTarget) {
        cap *= 2.0;
        if (cap > 1e12) throw TailNotDecayed("expected value: tail does not decay");
    }
    return cap;
}

}  // namespace

const char* to_string(EvaluationMethod method) {
    return method == EvaluationMethod::Exact ? "exact" : "approximation";
}

WishartLaw::WishartLaw(int m, int n) : m_(m), n_(n), alpha_(0.5 * (n - m - 1)) {
    if (m < 1) throw DomainError("WishartLaw: m must be positive");
    if (n < m) throw DegreesOfFreedomTooSmall("WishartLaw: n must be at least m");
}

TracyWidomGammaParams TracyWidomGammaParams::real_type1() {
    TracyWidomGammaParams p{};
    p.mu1 = -1.2065335746;
    p.sigma1 = std::sqrt(1.6077810346);
    p.s1 = 0.2934645241;
    p.kappa = 4.0 / (p.s1 * p.s1);
    p.theta = p.sigma1 * p.s1 / 2.0;
    p.rho = p.kappa * p.theta - p.mu1;
    return p;
}

double log_k_lambda(const WishartLaw& law) {
    const int m = law.m();
    double v = 0.5 * m * m * std::log(std::numbers::pi) - multivariate_ln_gamma(m, 0.5 * m) -
               multivariate_ln_gamma(m, 0.5 * law.n());
    for (int i = 1; i <= m; ++i) v += ln_gamma(law.alpha() + i);
    return v;
}

double log_k_joint(const WishartLaw& law) {
    const int m = law.m();
    return 0.5 * m * m * std::log(std::numbers::pi) - 0.5 * m * law.n() * std::numbers::ln2 -
           multivariate_ln_gamma(m, 0.5 * m) - multivariate_ln_gamma(m, 0.5 * law.n());
}

double psi(const WishartLaw& law, double a, double b) {
    if (!(a >= 0.0) || !(b > a)) throw DomainError("psi: need 0 <= a < b");
    if (law.n() > kMaxExactDof) throw NumericOverflow("psi: degrees of freedom beyond the exact path");

    const int m = law.m();
    const int size = m + (m % 2);
    const auto al = [&](int l) { return law.alpha() + l; };

    Matrix A = Matrix::Zero(size, size);
    for (int i = 1; i <= m - 1; ++i) {
        for (int j = i; j <= m - 1; ++j) {
            const double ai = al(i), aj = al(j);
            const double coef = std::exp((1.0 - ai - aj) * std::numbers::ln2 + ln_gamma(ai + aj) -
                                         ln_gamma(aj + 1.0) - ln_gamma(ai));
            const double edge = (g(aj, a / 2.0) + g(aj, b / 2.0)) * std::exp(-ln_gamma(aj + 1.0));
            A(i - 1, j) = A(i - 1, j - 1) + coef * reg_inc_gamma(ai + aj, a, b) -
                          edge * reg_inc_gamma(ai, a / 2.0, b / 2.0);
        }
    }
    if (m % 2 == 1) {
        for (int i = 1; i <= m; ++i) A(i - 1, m) = reg_inc_gamma(al(i), a / 2.0, b / 2.0);
    }
    A = A - A.transpose().eval();

    const LogPfaffian pf = log_pfaffian(A);
    if (pf.sign == 0) return 0.0;
    const double log_psi = log_k_lambda(law) + pf.log_abs;
    if (!std::isfinite(log_psi) && log_psi > 0.0) throw NumericOverflow("psi: log magnitude overflow");
    const double value = std::exp(log_psi);
    if (!std::isfinite(value) || value > 1.0 + kClampTol) throw NumericOverflow("psi: result outside [0,1]");
    return std::clamp(value, 0.0, 1.0);
}

double approx_cdf_lambda_max(const WishartLaw& law, double b) {
    const auto tw = TracyWidomGammaParams::real_type1();
    const Centering c = centering_max(law);
    const double bp = (b - c.mu) / c.sigma;
    return lower_reg_gamma(tw.kappa, std::max(0.0, bp + tw.rho) / tw.theta);
}

double approx_sf_lambda_min(const WishartLaw& law, double a) {
    const auto tw = TracyWidomGammaParams::real_type1();
    const Centering c = centering_min(law);
    const double ap = (a - c.mu) / c.sigma;
    return lower_reg_gamma(tw.kappa, std::max(0.0, -ap + tw.rho) / tw.theta);
}

double approx_cdf_lambda_min(const WishartLaw& law, double a) {
    const auto tw = TracyWidomGammaParams::real_type1();
    const Centering c = centering_min(law);
    const double ap = (a - c.mu) / c.sigma;
    const double x = std::max(0.0, -ap + tw.rho) / tw.theta;
    return x <= 0.0 ? 1.0 : boost::math::gamma_q(tw.kappa, x);
}

double cdf_lambda_min(const WishartLaw& law, double a) {
    if (law.method() == EvaluationMethod::Approximation) return approx_cdf_lambda_min(law, std::max(a, 0.0));
    if (a <= 0.0) return 0.0;
    return 1.0 - psi(law, a, kInf);
}

double cdf_lambda_max(const WishartLaw& law, double b) {
    if (law.method() == EvaluationMethod::Approximation) return approx_cdf_lambda_max(law, b);
    if (b <= 0.0) return 0.0;
    return psi(law, 0.0, b);
}

double expected_lambda_min(const WishartLaw& law) {
    std::function<double(double)> tail;
    if (law.method() == EvaluationMethod::Exact)
        tail = [&](double a) { return a <= 0.0 ? 1.0 : psi(law, a, kInf); };
    else
        tail = [&](double a) { return approx_sf_lambda_min(law, a); };
    return integrate_tail(tail, find_cap(tail, law.n()));
}

double expected_lambda_max(const WishartLaw& law) {
    std::function<double(double)> tail;
    if (law.method() == EvaluationMethod::Exact)
        tail = [&](double b) { return b <= 0.0 ? 1.0 : 1.0 - psi(law, 0.0, b); };
    else
        tail = [&](double b) { return 1.0 - approx_cdf_lambda_max(law, b); };
    return integrate_tail(tail, find_cap(tail, 2.0 * law.n()));
}

double quantile_lambda_min(const WishartLaw& law, double p) {
    return invert_monotone([&](double a) { return cdf_lambda_min(law, a); }, p);
}

double quantile_lambda_max(const WishartLaw& law, double p) {
    return invert_monotone([&](double b) { return cdf_lambda_max(law, b); }, p);
}

}  // namespace wishtrack
