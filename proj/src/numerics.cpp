// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace wishtrack {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPivotTol = 1e-13;
constexpr double kSemidefiniteTol = 1e-10;
constexpr double kJitter = 1e-12;

bool try_cholesky(const Matrix& P, Matrix& L) {
    const Eigen::Index n = P.rows();
    const double max_diag = P.diagonal().cwiseAbs().maxCoeff();
    const double threshold = kPivotTol * max_diag;
    L.setZero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = P(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > threshold)) return false;
        const double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = P(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / ljj;
        }
    }
    return true;
}

void check_square(const Matrix& P, const char* what) {
    if (P.rows() != P.cols() || P.rows() == 0)
        throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix");
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix entries) : entries_(std::move(entries)), cache_(std::make_shared<Cache>()) {
    check_square(entries_, "SpdMatrix");
    if (!entries_.allFinite()) throw DomainError("SpdMatrix: non-finite entry");
    const double scale = entries_.cwiseAbs().maxCoeff();
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * scale)
        throw DomainError("SpdMatrix: matrix is not symmetric");
    entries_ = 0.5 * (entries_ + entries_.transpose());
}

SpdMatrix SpdMatrix::identity(Eigen::Index n) { return SpdMatrix(Matrix::Identity(n, n)); }

const Matrix& SpdMatrix::chol() const {
    if (!cache_) throw DimensionMismatch("SpdMatrix: empty matrix");
    std::call_once(cache_->once, [this] {
        try {
            cache_->factor = cholesky(entries_);
        } catch (...) {
            cache_->error = std::current_exception();
        }
    });
    if (cache_->error) std::rethrow_exception(cache_->error);
    return cache_->factor;
}

Vector SpdMatrix::whiten(const Vector& v) const {
    if (v.size() != dim()) throw DimensionMismatch("whiten: dimension mismatch");
    return chol().triangularView<Eigen::Lower>().solve(v);
}

Vector SpdMatrix::solve(const Vector& v) const {
    const Vector z = whiten(v);
    return chol().transpose().triangularView<Eigen::Upper>().solve(z);
}

Matrix SpdMatrix::inverse() const {
    const Matrix& L = chol();
    const Matrix Linv = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim(), dim()));
    Matrix inv = Linv.transpose() * Linv;
    return 0.5 * (inv + inv.transpose());
}

Matrix cholesky(const SpdMatrix& P) { return P.chol(); }

Matrix cholesky(const Matrix& P) {
    check_square(P, "cholesky");
    Matrix L;
    if (try_cholesky(P, L)) return L;

    const EigenSpectrum spec = sym_eig(P);
    const double norm = std::max(std::abs(spec.max()), std::abs(spec.min()));
    if (norm == 0.0 || spec.min() < -kSemidefiniteTol * norm)
        throw NotPositiveDefinite("cholesky: matrix is not positive definite");

    const double n = static_cast<double>(P.rows());
    Matrix jittered = P;
    jittered.diagonal().array() += kJitter * P.trace() / n;
    if (try_cholesky(jittered, L)) return L;
    throw NotPositiveDefinite("cholesky: pivot below threshold after jitter");
}

EigenSpectrum sym_eig(const Matrix& S_in) {
    check_square(S_in, "sym_eig");
    const Eigen::Index n = S_in.rows();
    Matrix A = 0.5 * (S_in + S_in.transpose());
    Matrix V = Matrix::Identity(n, n);

    const double norm = A.norm();
    constexpr int kMaxSweeps = 100;
    bool converged = norm == 0.0;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(2.0 * off) <= 1e-15 * norm) {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) throw NonConvergence("sym_eig: Jacobi sweeps did not converge");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return A(i, i) > A(j, j); });

    EigenSpectrum out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = A(order[i], order[i]);
        out.vectors.col(i) = V.col(order[i]);
    }
    return out;
}

double ln_gamma(double z) {
    if (!(z > 0.0)) throw DomainError("ln_gamma: argument must be positive");
    return boost::math::lgamma(z);
}

double reg_inc_gamma(double z, double a, double b) {
    if (!(z > 0.0) || !(a >= 0.0) || !(b >= a)) throw DomainError("reg_inc_gamma: need z > 0 and 0 <= a <= b");
    if (a == b) return 0.0;
    if (std::isinf(b)) return a == 0.0 ? 1.0 : boost::math::gamma_q(z, a);
    if (a == 0.0) return boost::math::gamma_p(z, b);
    const double pa = boost::math::gamma_p(z, a);
    const double r = pa < 0.5 ? boost::math::gamma_p(z, b) - pa : boost::math::gamma_q(z, a) - boost::math::gamma_q(z, b);
    return std::clamp(r, 0.0, 1.0);
}

double multivariate_ln_gamma(int m, double z) {
    if (m < 1) throw DomainError("multivariate_ln_gamma: m must be positive");
    double s = 0.25 * m * (m - 1) * std::log(std::numbers::pi);
    for (int i = 1; i <= m; ++i) {
        const double arg = z - 0.5 * (i - 1);
        if (!(arg > 0.0)) throw DomainError("multivariate_ln_gamma: non-positive factor argument");
        s += ln_gamma(arg);
    }
    return s;
}

double chi2_cdf(double x, double dof) {
    if (!(dof > 0.0)) throw DomainError("chi2_cdf: dof must be positive");
    return x <= 0.0 ? 0.0 : boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_sf(double x, double dof) {
    if (!(dof > 0.0)) throw DomainError("chi2_sf: dof must be positive");
    return x <= 0.0 ? 1.0 : boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double p, double dof) {
    if (!(dof > 0.0) || !(p > 0.0 && p < 1.0)) throw DomainError("chi2_quantile: need dof > 0, p in (0,1)");
    return 2.0 * boost::math::gamma_p_inv(0.5 * dof, p);
}

double integrate_tail(const std::function<double(double)>& f, double upper_cap) {
    if (!(upper_cap > 0.0) || !std::isfinite(upper_cap)) throw DomainError("integrate_tail: cap must be positive and finite");
    if (f(upper_cap) >= 1e-6) throw TailNotDecayed("integrate_tail: integrand has not decayed at the cap");
    // x = u^2 removes the half-integer power behaviour of Wishart CDFs at 0.
    const auto g = [&f](double u) { return 2.0 * u * f(u * u); };
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, std::sqrt(upper_cap), 20, 1e-13, &error);
    if (!(error <= 1e-8)) throw NonConvergence("integrate_tail: error estimate above 1e-8");
    return value;
}

double invert_monotone(const std::function<double(double)>& F, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("invert_monotone: p must lie in (0,1)");
    const double f0 = F(0.0) - p;
    if (f0 == 0.0) return 0.0;
    if (f0 > 0.0) throw BracketFailure("invert_monotone: F(0) exceeds p");
    double lo = 0.0, hi = 1.0;
    double flo = f0, fhi = F(hi) - p;
    while (fhi < 0.0) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        if (hi > 1e12) throw BracketFailure("invert_monotone: no bracket below 1e12");
        fhi = F(hi) - p;
    }
    if (fhi == 0.0) return hi;
    std::uintmax_t max_iter = 300;
    const auto g = [&](double x) { return F(x) - p; };
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    const double a = r.first, b = r.second;
    return std::abs(g(a)) <= std::abs(g(b)) ? a : b;
}

LogPfaffian log_pfaffian(Matrix A) {
    check_square(A, "log_pfaffian");
    const Eigen::Index n = A.rows();
    if (n % 2 != 0) return {-kInf, 0};
    LogPfaffian out{0.0, 1};
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp = k + 1;
        double best = std::abs(A(k + 1, k));
        for (Eigen::Index i = k + 2; i < n; ++i) {
            if (std::abs(A(i, k)) > best) {
                best = std::abs(A(i, k));
                kp = i;
            }
        }
        if (kp != k + 1) {
            A.row(k + 1).swap(A.row(kp));
            A.col(k + 1).swap(A.col(kp));
            out.sign = -out.sign;
        }
        const double pivot = A(k, k + 1);
        if (pivot == 0.0) return {-kInf, 0};
        out.log_abs += std::log(std::abs(pivot));
        if (pivot < 0.0) out.sign = -out.sign;
        if (k + 2 < n) {
            const Eigen::Index r = n - k - 2;
            const Vector tau = A.row(k).tail(r).transpose() / pivot;
            const Vector col = A.col(k + 1).tail(r);
            A.bottomRightCorner(r, r) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return out;
}

}  // namespace wishtrack
