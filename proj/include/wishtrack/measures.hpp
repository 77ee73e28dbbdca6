// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wishtrack/numerics.hpp"
#include "wishtrack/wishart.hpp"

namespace wishtrack {

// (x_hat, P), or by reuse an innovation pair (y_tilde, S).
struct GaussianEstimate {
    Vector x;
    SpdMatrix P;
};

// A residual (estimation error or innovation) with its reported covariance.
struct ResidualSample {
    Vector residual;
    SpdMatrix covariance;
};

Vector normalized_error(const Vector& err, const SpdMatrix& P);

// Accumulated sample covariance of normalized residuals: the NEES matrix
// over MC runs, or the NIS matrix over a time window. With a window length
// the oldest outer product is evicted once the window is full.
class NormalizedSquareStat {
public:
    explicit NormalizedSquareStat(Eigen::Index dim, std::optional<std::size_t> window = std::nullopt);

    Eigen::Index dim() const { return dim_; }
    std::size_t count() const { return count_; }
    const Matrix& sum() const { return sum_; }
    std::optional<std::size_t> window() const { return window_; }

    void accumulate(const Vector& err, const SpdMatrix& P);
    void accumulate_normalized(const Vector& z);

    // Growing accumulators only.
    void merge(const NormalizedSquareStat& other);

    Matrix mean() const;
    EigenSpectrum spectrum() const { return sym_eig(mean()); }

private:
    Eigen::Index dim_;
    std::optional<std::size_t> window_;
    Matrix sum_;
    std::size_t count_ = 0;
    std::vector<Vector> ring_;
    std::size_t head_ = 0;
};

double scalar_nees(std::span<const ResidualSample> errors);
double scalar_nis(std::span<const ResidualSample> innovations);

struct CredibilityRun {
    Vector err;
    SpdMatrix P;
    SpdMatrix Sigma;
};

// (10/M) sum log10( e^T P^{-1} e / e^T Sigma^{-1} e )
double nci(std::span<const CredibilityRun> runs);
// Sigma replaced by the sample covariance of the errors; needs M >= dim.
double nci(std::span<const ResidualSample> errors);

// Sample covariance (1/M) sum e e^T about zero.
SpdMatrix sample_error_covariance(std::span<const ResidualSample> errors);

double coin(const SpdMatrix& Sigma_hat, const SpdMatrix& P);

// (lambda_min, lambda_max) of L^{-1} Sigma L^{-T}
std::pair<double, double> credibility_interval(const SpdMatrix& Sigma, const SpdMatrix& P);

struct ConfidenceBand {
    double lower;
    double upper;
    double p;
    std::size_t normalization;
    EvaluationMethod method = EvaluationMethod::Exact;
};

// (F^{-1}_min(1-p)/count, F^{-1}_max(p)/count) of W_dim(count, I)
ConfidenceBand conservativeness_band(Eigen::Index dim, std::size_t count, double p);
// (F^{-1}_chi2(1-p)/(count*dim), F^{-1}_chi2(p)/(count*dim)) for lambda_mean
ConfidenceBand chi2_band(Eigen::Index dim, std::size_t count, double p);

struct H0Verdict {
    bool below = false;
    bool above = false;
    bool reject() const { return below || above; }
};

// Two-sided eigenvalue test on lambda_min / lambda_max.
H0Verdict h0_test(const EigenSpectrum& spectrum, const ConfidenceBand& band);
H0Verdict h0_test(const NormalizedSquareStat& stat, const ConfidenceBand& band);
// Two-sided test on lambda_mean against a chi2 band.
H0Verdict h0_test_mean(const EigenSpectrum& spectrum, const ConfidenceBand& band);
// One-sided conservativeness check on lambda_max.
bool conservative(const EigenSpectrum& spectrum, const ConfidenceBand& band);

struct MismatchDirection {
    Vector b_max;
    double theta_deg;
};

// b_max = B u_max with the first component made non-negative; theta is its
// angle from the x-axis in the plane of the first two components.
MismatchDirection mismatch_direction(const NormalizedSquareStat& stat, const Matrix& B);
MismatchDirection mismatch_direction(const EigenSpectrum& spectrum, const Matrix& B);

}  // namespace wishtrack
