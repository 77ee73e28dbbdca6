// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "wishtrack/measures.hpp"
#include "wishtrack/numerics.hpp"

namespace wishtrack {

// State layout for every model: [x, y, vx, vy].
inline constexpr Eigen::Index kCvDim = 4;

enum class NoiseVariant {
    SampleHold,          // G q^2 I G^T
    WhiteNoiseJerkless,  // q^2 [T^3/3, T^2/2; T^2/2, T] per axis
    Anisotropic,         // white noise with q^2 diag(alpha^2, 1/alpha^2)
    Switching,           // sample-and-hold, nearly central accelerations in the velocity frame
};

struct CvModel {
    double T = 1.0;
    double q = 1.0;
    NoiseVariant variant = NoiseVariant::SampleHold;
    double alpha = 1.0;
};

struct Transition {
    Matrix F;
    Matrix Q;
    // Q = noise_factor * noise_factor^T; used to draw process noise.
    Matrix noise_factor;
};

// (u_par, u_perp) from a velocity; throws ZeroVelocity below 1e-9.
std::pair<Eigen::Vector2d, Eigen::Vector2d> velocity_frame(const Eigen::Vector2d& velocity);

Matrix cv_F(double T);
// Sample-and-hold acceleration gain.
Matrix cv_G(double T);

// velocity is required by the Switching variant only.
Transition cv_transition(const CvModel& model, const std::optional<Eigen::Vector2d>& velocity = std::nullopt);

template <class Rng>
Vector propagate_truth(const Transition& tr, const Vector& x, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector w(tr.noise_factor.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
    return tr.F * x + tr.noise_factor * w;
}

enum class SensorKind { LinearPosition, PolarFromSite };

struct SensorModel {
    SensorKind kind = SensorKind::LinearPosition;
    Eigen::Vector2d site = Eigen::Vector2d::Zero();
    SpdMatrix R;

    static SensorModel linear_position(double sigma_v);
    // sigma_phi in radians
    static SensorModel polar(const Eigen::Vector2d& site, double sigma_r, double sigma_phi);
};

Vector measure(const SensorModel& sensor, const Vector& x);
Matrix measurement_jacobian(const SensorModel& sensor, const Vector& x);
// y - h(x), azimuth wrapped to (-pi, pi].
Vector measurement_residual(const SensorModel& sensor, const Vector& y, const Vector& x);

double wrap_angle(double phi);

template <class Rng>
Vector simulate_measurement(const SensorModel& sensor, const Vector& x, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(sensor.R.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    return measure(sensor, x) + sensor.R.chol() * v;
}

struct FilterState {
    GaussianEstimate estimate;
    // (y_tilde, S) of the most recent update
    std::optional<GaussianEstimate> innovation;
};

FilterState kf_predict(const FilterState& state, const Matrix& F, const Matrix& Q);
FilterState kf_update(const FilterState& state, const Vector& y, const Matrix& H, const SpdMatrix& R);
FilterState ekf_update(const FilterState& state, const Vector& y, const SensorModel& sensor);
// kf_update for linear sensors, ekf_update for polar ones.
FilterState sensor_update(const FilterState& state, const Vector& y, const SensorModel& sensor);

// Posterior bound recursion linearized along the true trajectory:
// J^{-1} <- F J^{-1} F^T + Q, then J += sum_s H_s^T R_s^{-1} H_s at x_k.
// Returns the bound covariance for each trajectory point.
std::vector<SpdMatrix> crlb_recursion(const CvModel& model, std::span<const SensorModel> sensors,
                                      std::span<const Vector> trajectory, const SpdMatrix& P0);

}  // namespace wishtrack
