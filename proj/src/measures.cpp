// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/measures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wishtrack {

namespace {

constexpr double kDegenerateGap = 1e-9;

Matrix congruence(const SpdMatrix& Sigma, const SpdMatrix& P) {
    if (Sigma.dim() != P.dim()) throw DimensionMismatch("dimension mismatch between Sigma and P");
    const auto L = P.chol().triangularView<Eigen::Lower>();
    const Matrix X = L.solve(Sigma.entries());
    Matrix Xi = L.solve(X.transpose());
    return 0.5 * (Xi + Xi.transpose());
}

double mean_quadratic_form(std::span<const ResidualSample> samples) {
    if (samples.empty()) throw EmptyInput("no samples");
    double s = 0.0;
    for (const auto& smp : samples) s += normalized_error(smp.residual, smp.covariance).squaredNorm();
    return s / static_cast<double>(samples.size());
}

}  // namespace

Vector normalized_error(const Vector& err, const SpdMatrix& P) {
    if (err.size() != P.dim()) throw DimensionMismatch("normalized_error: dimension mismatch");
    return P.whiten(err);
}

NormalizedSquareStat::NormalizedSquareStat(Eigen::Index dim, std::optional<std::size_t> window)
    : dim_(dim), window_(window), sum_(Matrix::Zero(dim, dim)) {
    if (dim < 1) throw DomainError("NormalizedSquareStat: dim must be positive");
    if (window_ && *window_ == 0) throw DomainError("NormalizedSquareStat: window must be positive");
}

void NormalizedSquareStat::accumulate(const Vector& err, const SpdMatrix& P) {
    if (err.size() != dim_ || P.dim() != dim_) throw DimensionMismatch("accumulate: dimension mismatch");
    accumulate_normalized(normalized_error(err, P));
}

void NormalizedSquareStat::accumulate_normalized(const Vector& z) {
    if (z.size() != dim_) throw DimensionMismatch("accumulate: dimension mismatch");
    if (!window_) {
        sum_.noalias() += z * z.transpose();
        ++count_;
        return;
    }
    if (ring_.size() < *window_) {
        ring_.push_back(z);
    } else {
        ring_[head_] = z;
        head_ = (head_ + 1) % *window_;
    }
    count_ = ring_.size();
    // Recomputed from the buffer so evictions leave no rounding residue.
    sum_.setZero();
    for (const auto& v : ring_) sum_.noalias() += v * v.transpose();
}

void NormalizedSquareStat::merge(const NormalizedSquareStat& other) {
    if (other.dim_ != dim_) throw DimensionMismatch("merge: dimension mismatch");
    if (window_ || other.window_) throw std::logic_error("merge: windowed accumulators cannot be merged");
    sum_ += other.sum_;
    count_ += other.count_;
}

Matrix NormalizedSquareStat::mean() const {
    if (count_ == 0) throw EmptyInput("NormalizedSquareStat: no samples");
    return sum_ / static_cast<double>(count_);
}

double scalar_nees(std::span<const ResidualSample> errors) { return mean_quadratic_form(errors); }

double scalar_nis(std::span<const ResidualSample> innovations) { return mean_quadratic_form(innovations); }

double nci(std::span<const CredibilityRun> runs) {
    if (runs.empty()) throw EmptyInput("nci: no runs");
    double s = 0.0;
    for (const auto& r : runs) {
        const double qp = normalized_error(r.err, r.P).squaredNorm();
        const double qs = normalized_error(r.err, r.Sigma).squaredNorm();
        if (!(qp > 0.0) || !(qs > 0.0)) throw DomainError("nci: zero estimation error");
        s += std::log10(qp / qs);
    }
    return 10.0 * s / static_cast<double>(runs.size());
}

SpdMatrix sample_error_covariance(std::span<const ResidualSample> errors) {
    if (errors.empty()) throw EmptyInput("sample covariance: no samples");
    const Eigen::Index n = errors.front().residual.size();
    if (errors.size() < static_cast<std::size_t>(n)) throw InsufficientSamples("sample covariance: fewer samples than dimensions");
    Matrix S = Matrix::Zero(n, n);
    for (const auto& e : errors) {
        if (e.residual.size() != n) throw DimensionMismatch("sample covariance: dimension mismatch");
        S.noalias() += e.residual * e.residual.transpose();
    }
    S /= static_cast<double>(errors.size());
    return SpdMatrix(0.5 * (S + S.transpose()));
}

double nci(std::span<const ResidualSample> errors) {
    const SpdMatrix Sigma_hat = sample_error_covariance(errors);
    std::vector<CredibilityRun> runs;
    runs.reserve(errors.size());
    for (const auto& e : errors) runs.push_back({e.residual, e.covariance, Sigma_hat});
    return nci(runs);
}

double coin(const SpdMatrix& Sigma_hat, const SpdMatrix& P) { return sym_eig(congruence(Sigma_hat, P)).max(); }

std::pair<double, double> credibility_interval(const SpdMatrix& Sigma, const SpdMatrix& P) {
    const EigenSpectrum s = sym_eig(congruence(Sigma, P));
    return {s.min(), s.max()};
}

ConfidenceBand conservativeness_band(Eigen::Index dim, std::size_t count, double p) {
    if (!(p > 0.5 && p < 1.0)) throw DomainError("band: p must lie in (0.5, 1)");
    if (count < static_cast<std::size_t>(dim))
        throw DegreesOfFreedomTooSmall("band: count must be at least the dimension");
    const WishartLaw law(static_cast<int>(dim), static_cast<int>(count));
    const double M = static_cast<double>(count);
    return {quantile_lambda_min(law, 1.0 - p) / M, quantile_lambda_max(law, p) / M, p, count, law.method()};
}

ConfidenceBand chi2_band(Eigen::Index dim, std::size_t count, double p) {
    if (!(p > 0.5 && p < 1.0)) throw DomainError("band: p must lie in (0.5, 1)");
    if (dim < 1 || count < 1) throw DomainError("band: dim and count must be positive");
    const double dof = static_cast<double>(count) * static_cast<double>(dim);
    return {chi2_quantile(1.0 - p, dof) / dof, chi2_quantile(p, dof) / dof, p, count, EvaluationMethod::Exact};
}

H0Verdict h0_test(const EigenSpectrum& spectrum, const ConfidenceBand& band) {
    return {spectrum.min() < band.lower, spectrum.max() > band.upper};
}

H0Verdict h0_test(const NormalizedSquareStat& stat, const ConfidenceBand& band) {
    if (stat.count() != band.normalization) throw DimensionMismatch("h0_test: band built for a different count");
    return h0_test(stat.spectrum(), band);
}

H0Verdict h0_test_mean(const EigenSpectrum& spectrum, const ConfidenceBand& band) {
    const double m = spectrum.mean();
    return {m < band.lower, m > band.upper};
}

bool conservative(const EigenSpectrum& spectrum, const ConfidenceBand& band) { return spectrum.max() <= band.upper; }

MismatchDirection mismatch_direction(const EigenSpectrum& spectrum, const Matrix& B) {
    if (spectrum.values.size() < 2 || B.rows() < 2) throw DimensionMismatch("mismatch_direction: need dimension >= 2");
    if (B.cols() != spectrum.vectors.rows()) throw DimensionMismatch("mismatch_direction: dimension mismatch");
    if (spectrum.values(0) - spectrum.values(1) < kDegenerateGap)
        throw DegenerateSpectrum("mismatch_direction: leading eigenvalue is not simple");
    Vector b = B * spectrum.vectors.col(0);
    if (b(0) < 0.0 || (b(0) == 0.0 && b(1) < 0.0)) b = -b;
    const double theta = std::atan2(b(1), b(0)) * 180.0 / std::numbers::pi;
    return {b, theta};
}

MismatchDirection mismatch_direction(const NormalizedSquareStat& stat, const Matrix& B) {
    return mismatch_direction(stat.spectrum(), B);
}

}  // namespace wishtrack
