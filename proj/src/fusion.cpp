// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/fusion.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>

namespace wishtrack {

namespace {

void check_pair(const GaussianEstimate& a, const GaussianEstimate& b) {
    if (a.x.size() != b.x.size() || a.P.dim() != b.P.dim() || a.x.size() != a.P.dim())
        throw DimensionMismatch("fusion: dimension mismatch");
}

double ci_trace(const Matrix& Ia, const Matrix& Ib, double omega) {
    const Matrix info = omega * Ia + (1.0 - omega) * Ib;
    return SpdMatrix(0.5 * (info + info.transpose())).inverse().trace();
}

// Orders the inputs so that fuse_ci(a,b) and fuse_ci(b,a) evaluate identically.
bool precedes(const GaussianEstimate& a, const GaussianEstimate& b) {
    const Matrix& A = a.P.entries();
    const Matrix& B = b.P.entries();
    if (A.trace() != B.trace()) return A.trace() < B.trace();
    for (Eigen::Index i = 0; i < A.size(); ++i)
        if (A.data()[i] != B.data()[i]) return A.data()[i] < B.data()[i];
    for (Eigen::Index i = 0; i < a.x.size(); ++i)
        if (a.x(i) != b.x(i)) return a.x(i) < b.x(i);
    return true;
}

}  // namespace

GaussianEstimate fuse_ci_at(const GaussianEstimate& a, const GaussianEstimate& b, double omega) {
    check_pair(a, b);
    if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("fuse_ci: omega must lie in [0,1]");
    const Matrix Ia = a.P.inverse();
    const Matrix Ib = b.P.inverse();
    Matrix info = omega * Ia + (1.0 - omega) * Ib;
    const SpdMatrix info_spd(0.5 * (info + info.transpose()));
    const Vector eta = omega * (Ia * a.x) + (1.0 - omega) * (Ib * b.x);
    return {info_spd.solve(eta), SpdMatrix(info_spd.inverse())};
}

FusionResult fuse_ci(const GaussianEstimate& a, const GaussianEstimate& b) {
    check_pair(a, b);
    if (!precedes(a, b)) {
        FusionResult r = fuse_ci(b, a);
        r.omega = 1.0 - r.omega;
        return r;
    }
    const Matrix Ia = a.P.inverse();
    const Matrix Ib = b.P.inverse();
    const auto objective = [&](double w) { return ci_trace(Ia, Ib, w); };

    std::uintmax_t max_iter = 200;
    const auto [w_opt, t_opt] = boost::math::tools::brent_find_minima(objective, 0.0, 1.0, 40, max_iter);
    double omega = w_opt, best = t_opt;
    for (const double edge : {0.0, 1.0}) {
        const double t = objective(edge);
        if (t < best) {
            best = t;
            omega = edge;
        }
    }
    return {fuse_ci_at(a, b, omega), FusionMethod::CI, omega};
}

FusionResult fuse_le(const GaussianEstimate& a, const GaussianEstimate& b) {
    check_pair(a, b);
    const Eigen::Index n = a.x.size();
    const Matrix& La = a.P.chol();
    const auto Lt = La.triangularView<Eigen::Lower>();
    // M = La^{-1} Pb La^{-T} = U D U^T, so T = U^T La^{-1} maps Pa -> I, Pb -> D.
    const Matrix X = Lt.solve(b.P.entries());
    const Matrix M = Lt.solve(X.transpose());
    const EigenSpectrum spec = sym_eig(0.5 * (M + M.transpose()));
    const Matrix& U = spec.vectors;

    const Vector ta = U.transpose() * Lt.solve(a.x);
    const Vector tb = U.transpose() * Lt.solve(b.x);
    Vector t(n), d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double di = spec.values(i);
        if (di < 1.0) {
            t(i) = tb(i);
            d(i) = di;
        } else {
            t(i) = ta(i);
            d(i) = 1.0;
        }
    }
    const Matrix Tinv = La * U;
    Matrix P = Tinv * d.asDiagonal() * Tinv.transpose();
    return {{Tinv * t, SpdMatrix(0.5 * (P + P.transpose()))}, FusionMethod::LE, 0.0};
}

double rmt(std::span<const SpdMatrix> covariances) {
    if (covariances.empty()) throw EmptyInput("rmt: no covariances");
    const Eigen::Index n = covariances.front().dim();
    double s = 0.0;
    for (const auto& P : covariances) {
        if (P.dim() != n) throw DimensionMismatch("rmt: dimension mismatch");
        s += P.trace();
    }
    return std::sqrt(s / static_cast<double>(covariances.size()));
}

}  // namespace wishtrack
