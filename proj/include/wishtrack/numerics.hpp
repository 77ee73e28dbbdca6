// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <mutex>

#include "wishtrack/errors.hpp"

namespace wishtrack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric positive (semi)definite matrix with a lazily computed, shared
// Cholesky factor. Copies share the cache; the entries never change.
class SpdMatrix {
public:
    SpdMatrix() = default;
    explicit SpdMatrix(Matrix entries);

    static SpdMatrix identity(Eigen::Index n);

    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    double trace() const { return entries_.trace(); }

    // Lower-triangular L with L*L^T = P (after jitter, if it was needed).
    const Matrix& chol() const;

    // L^{-1} v
    Vector whiten(const Vector& v) const;
    // P^{-1} v
    Vector solve(const Vector& v) const;
    Matrix inverse() const;

private:
    struct Cache {
        std::once_flag once;
        Matrix factor;
        std::exception_ptr error;
    };

    Matrix entries_;
    std::shared_ptr<Cache> cache_;
};

struct EigenSpectrum {
    Vector values;   // descending
    Matrix vectors;  // column i pairs with values[i]

    double max() const { return values(0); }
    double min() const { return values(values.size() - 1); }
    double mean() const { return values.mean(); }
};

// Throws NotPositiveDefinite; applies the jitter rule for numerically
// semidefinite input.
Matrix cholesky(const SpdMatrix& P);
Matrix cholesky(const Matrix& P);

EigenSpectrum sym_eig(const Matrix& S);

double ln_gamma(double z);

// gamma(z, a, b) / Gamma(z); b may be +inf.
double reg_inc_gamma(double z, double a, double b);

// log Gamma_m(z) = (m(m-1)/4) log(pi) + sum_{i=1..m} log Gamma(z - (i-1)/2)
double multivariate_ln_gamma(int m, double z);

double chi2_cdf(double x, double dof);
double chi2_sf(double x, double dof);
double chi2_quantile(double p, double dof);

// Integral of f over [0, upper_cap], f a non-increasing tail 1 - F.
double integrate_tail(const std::function<double(double)>& f, double upper_cap);

// Smallest x >= 0 with F(x) = p for a continuous non-decreasing F.
double invert_monotone(const std::function<double(double)>& F, double p);

struct LogPfaffian {
    double log_abs;  // -inf when singular
    int sign;
};

// Pfaffian of a real skew-symmetric matrix of even order via
// Parlett-Reid tridiagonalization with pivoting.
LogPfaffian log_pfaffian(Matrix A);

}  // namespace wishtrack
