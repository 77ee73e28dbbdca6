// Independent reference computations used only by the tests. Nothing here
// calls into the library's special functions.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// Composite Simpson rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double chi2_density(double x, double k) {
    if (x <= 0.0) return 0.0;
    return std::exp((k / 2.0 - 1.0) * std::log(x) - x / 2.0 - (k / 2.0) * std::log(2.0) - std::lgamma(k / 2.0));
}

// Chi-square CDF for even dof: 1 - e^{-x/2} sum_{j<k/2} (x/2)^j / j!
inline double chi2_cdf_even(double x, int k) {
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < k / 2; ++j) {
        term *= (x / 2.0) / j;
        sum += term;
    }
    return 1.0 - std::exp(-x / 2.0) * sum;
}

// Chi-square CDF for any dof via the series of the lower incomplete gamma.
inline double chi2_cdf_series(double x, double k) {
    if (x <= 0.0) return 0.0;
    const double a = k / 2.0, t = x / 2.0;
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 2000; ++n) {
        term *= t / (a + n);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::exp(a * std::log(t) - t - std::lgamma(a)) * sum;
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double floor = 0.1) {
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = N(rng);
    Eigen::MatrixXd S = A * A.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
    return 0.5 * (S + S.transpose());
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = N(rng);
    return 0.5 * (A + A.transpose());
}

// Extreme eigenvalues of Z Z^T, Z m x n standard normal, via Eigen's solver.
inline std::pair<double, double> sampled_extremes(int m, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXd Z(m, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) Z(i, j) = N(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z * Z.transpose(), Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(m - 1)};
}

// Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& F) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = F(xs[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

}  // namespace oracle
