// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "wishtrack/numerics.hpp"

namespace wishtrack {

// Largest degrees of freedom evaluated with the exact Pfaffian recursion.
// Beyond this, double precision cancellation dominates and the shifted-gamma
// approximation is used instead.
inline constexpr int kMaxExactDof = 150;

enum class EvaluationMethod { Exact, Approximation };

const char* to_string(EvaluationMethod method);

// W_m(n, I)
class WishartLaw {
public:
    WishartLaw(int m, int n);

    int m() const { return m_; }
    int n() const { return n_; }
    double alpha() const { return alpha_; }

    EvaluationMethod method() const {
        return n_ <= kMaxExactDof ? EvaluationMethod::Exact : EvaluationMethod::Approximation;
    }

private:
    int m_;
    int n_;
    double alpha_;
};

struct TracyWidomGammaParams {
    double mu1;
    double sigma1;
    double s1;
    double kappa;
    double theta;
    double rho;

    static TracyWidomGammaParams real_type1();
};

// Pr(a <= lambda_min and lambda_max <= b); b may be +inf.
// Throws NumericOverflow when the exact path is unavailable (n > kMaxExactDof)
// or the evaluated probability leaves [0,1] by more than 1e-6.
double psi(const WishartLaw& law, double a, double b);

double log_k_lambda(const WishartLaw& law);
// Normalization of the joint eigenvalue density.
double log_k_joint(const WishartLaw& law);

// Dispatch on law.method().
double cdf_lambda_min(const WishartLaw& law, double a);
double cdf_lambda_max(const WishartLaw& law, double b);

double approx_cdf_lambda_min(const WishartLaw& law, double a);
double approx_cdf_lambda_max(const WishartLaw& law, double b);
// r(kappa, max(0, -a' + rho)/theta): the complement of approx_cdf_lambda_min.
double approx_sf_lambda_min(const WishartLaw& law, double a);

double expected_lambda_min(const WishartLaw& law);
double expected_lambda_max(const WishartLaw& law);

double quantile_lambda_min(const WishartLaw& law, double p);
double quantile_lambda_max(const WishartLaw& law, double p);

template <class Rng>
SpdMatrix sample(const WishartLaw& law, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix Z(law.m(), law.n());
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
        for (Eigen::Index i = 0; i < Z.rows(); ++i) Z(i, j) = normal(rng);
    Matrix V = Z * Z.transpose();
    return SpdMatrix(0.5 * (V + V.transpose()));
}

}  // namespace wishtrack
