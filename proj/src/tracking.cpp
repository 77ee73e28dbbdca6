// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/tracking.hpp"

#include <cmath>
#include <numbers>

namespace wishtrack {

namespace {

constexpr double kMinSpeed = 1e-9;
constexpr double kMinRange = 1e-6;
constexpr double kCentralLongitudinal = 1e-6;
constexpr double kCentralLateral = 2.0;

Matrix white_noise_block(double T, double qx2, double qy2) {
    Matrix Q = Matrix::Zero(kCvDim, kCvDim);
    const double T2 = T * T / 2.0, T3 = T * T * T / 3.0;
    Q(0, 0) = qx2 * T3;
    Q(0, 2) = Q(2, 0) = qx2 * T2;
    Q(2, 2) = qx2 * T;
    Q(1, 1) = qy2 * T3;
    Q(1, 3) = Q(3, 1) = qy2 * T2;
    Q(3, 3) = qy2 * T;
    return Q;
}

FilterState joseph_update(const FilterState& state, const Vector& y_tilde, const Matrix& H, const SpdMatrix& R) {
    const Matrix& P = state.estimate.P.entries();
    const Eigen::Index n = P.rows();
    if (H.cols() != n || H.rows() != R.dim() || y_tilde.size() != R.dim())
        throw DimensionMismatch("kf_update: dimension mismatch");

    const Matrix PHt = P * H.transpose();
    Matrix S = H * PHt + R.entries();
    const SpdMatrix Sm(0.5 * (S + S.transpose()));
    const auto Ls = Sm.chol().triangularView<Eigen::Lower>();
    // K = P H^T S^{-1}
    const Matrix K = Ls.transpose().solve(Ls.solve(PHt.transpose())).transpose();

    const Matrix IKH = Matrix::Identity(n, n) - K * H;
    Matrix Pp = IKH * P * IKH.transpose() + K * R.entries() * K.transpose();

    FilterState out;
    out.estimate.x = state.estimate.x + K * y_tilde;
    out.estimate.P = SpdMatrix(0.5 * (Pp + Pp.transpose()));
    out.innovation = GaussianEstimate{y_tilde, Sm};
    return out;
}

}  // namespace

std::pair<Eigen::Vector2d, Eigen::Vector2d> velocity_frame(const Eigen::Vector2d& velocity) {
    const double speed = velocity.norm();
    if (!(speed >= kMinSpeed)) throw ZeroVelocity("velocity_frame: speed below 1e-9");
    const Eigen::Vector2d u = velocity / speed;
    return {u, Eigen::Vector2d(-u(1), u(0))};
}

Matrix cv_F(double T) {
    Matrix F = Matrix::Identity(kCvDim, kCvDim);
    F(0, 2) = F(1, 3) = T;
    return F;
}

Matrix cv_G(double T) {
    Matrix G = Matrix::Zero(kCvDim, 2);
    G(0, 0) = G(1, 1) = T * T / 2.0;
    G(2, 0) = G(3, 1) = T;
    return G;
}

Transition cv_transition(const CvModel& model, const std::optional<Eigen::Vector2d>& velocity) {
    if (!(model.T > 0.0)) throw DomainError("cv_transition: T must be positive");
    if (!(model.q >= 0.0)) throw DomainError("cv_transition: q must be non-negative");
    Transition tr;
    tr.F = cv_F(model.T);
    const double q2 = model.q * model.q;
    switch (model.variant) {
        case NoiseVariant::SampleHold: {
            tr.noise_factor = cv_G(model.T) * model.q;
            break;
        }
        case NoiseVariant::Switching: {
            if (!velocity) throw ZeroVelocity("cv_transition: switching variant needs the current velocity");
            const auto [u_par, u_perp] = velocity_frame(*velocity);
            Matrix U(2, 2);
            U.col(0) = u_par * (model.q * std::sqrt(kCentralLongitudinal));
            U.col(1) = u_perp * (model.q * std::sqrt(kCentralLateral));
            tr.noise_factor = cv_G(model.T) * U;
            break;
        }
        case NoiseVariant::WhiteNoiseJerkless:
        case NoiseVariant::Anisotropic: {
            const double a2 = model.variant == NoiseVariant::Anisotropic ? model.alpha * model.alpha : 1.0;
            if (!(a2 > 0.0)) throw DomainError("cv_transition: alpha must be non-zero");
            const Matrix Q = white_noise_block(model.T, q2 * a2, q2 / a2);
            tr.noise_factor = q2 > 0.0 ? cholesky(Q) : Matrix(Matrix::Zero(kCvDim, kCvDim));
            tr.Q = Q;
            return tr;
        }
    }
    Matrix Q = tr.noise_factor * tr.noise_factor.transpose();
    tr.Q = 0.5 * (Q + Q.transpose());
    return tr;
}

SensorModel SensorModel::linear_position(double sigma_v) {
    if (!(sigma_v > 0.0)) throw DomainError("sensor: sigma must be positive");
    SensorModel s;
    s.kind = SensorKind::LinearPosition;
    s.R = SpdMatrix(Matrix::Identity(2, 2) * (sigma_v * sigma_v));
    return s;
}

SensorModel SensorModel::polar(const Eigen::Vector2d& site, double sigma_r, double sigma_phi) {
    if (!(sigma_r > 0.0) || !(sigma_phi > 0.0)) throw DomainError("sensor: sigma must be positive");
    SensorModel s;
    s.kind = SensorKind::PolarFromSite;
    s.site = site;
    Matrix R = Matrix::Zero(2, 2);
    R(0, 0) = sigma_r * sigma_r;
    R(1, 1) = sigma_phi * sigma_phi;
    s.R = SpdMatrix(R);
    return s;
}

double wrap_angle(double phi) {
    double w = std::remainder(phi, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
    return w;
}

Vector measure(const SensorModel& sensor, const Vector& x) {
    if (x.size() < 2) throw DimensionMismatch("measure: state too short");
    if (sensor.kind == SensorKind::LinearPosition) return x.head(2);
    const double dx = x(0) - sensor.site(0), dy = x(1) - sensor.site(1);
    const double r = std::hypot(dx, dy);
    if (r <= kMinRange) throw RangeSingularity("measure: target at the sensor site");
    Vector h(2);
    h << r, std::atan2(dy, dx);
    return h;
}

Matrix measurement_jacobian(const SensorModel& sensor, const Vector& x) {
    Matrix H = Matrix::Zero(2, x.size());
    if (sensor.kind == SensorKind::LinearPosition) {
        H(0, 0) = H(1, 1) = 1.0;
        return H;
    }
    const double dx = x(0) - sensor.site(0), dy = x(1) - sensor.site(1);
    const double r2 = dx * dx + dy * dy;
    const double r = std::sqrt(r2);
    if (r <= kMinRange) throw RangeSingularity("measurement_jacobian: target at the sensor site");
    H(0, 0) = dx / r;
    H(0, 1) = dy / r;
    H(1, 0) = -dy / r2;
    H(1, 1) = dx / r2;
    return H;
}

Vector measurement_residual(const SensorModel& sensor, const Vector& y, const Vector& x) {
    Vector res = y - measure(sensor, x);
    if (sensor.kind == SensorKind::PolarFromSite) res(1) = wrap_angle(res(1));
    return res;
}

FilterState kf_predict(const FilterState& state, const Matrix& F, const Matrix& Q) {
    const Matrix& P = state.estimate.P.entries();
    if (F.cols() != P.rows() || F.rows() != Q.rows() || Q.rows() != Q.cols())
        throw DimensionMismatch("kf_predict: dimension mismatch");
    Matrix Pp = F * P * F.transpose() + Q;
    FilterState out;
    out.estimate.x = F * state.estimate.x;
    out.estimate.P = SpdMatrix(0.5 * (Pp + Pp.transpose()));
    out.innovation = state.innovation;
    return out;
}

FilterState kf_update(const FilterState& state, const Vector& y, const Matrix& H, const SpdMatrix& R) {
    if (H.cols() != state.estimate.x.size() || H.rows() != y.size()) throw DimensionMismatch("kf_update: dimension mismatch");
    return joseph_update(state, y - H * state.estimate.x, H, R);
}

FilterState ekf_update(const FilterState& state, const Vector& y, const SensorModel& sensor) {
    const Vector& x = state.estimate.x;
    return joseph_update(state, measurement_residual(sensor, y, x), measurement_jacobian(sensor, x), sensor.R);
}

FilterState sensor_update(const FilterState& state, const Vector& y, const SensorModel& sensor) {
    if (sensor.kind == SensorKind::LinearPosition)
        return kf_update(state, y, measurement_jacobian(sensor, state.estimate.x), sensor.R);
    return ekf_update(state, y, sensor);
}

std::vector<SpdMatrix> crlb_recursion(const CvModel& model, std::span<const SensorModel> sensors,
                                      std::span<const Vector> trajectory, const SpdMatrix& P0) {
    if (P0.dim() != kCvDim) throw DimensionMismatch("crlb_recursion: P0 must be 4x4");
    const Transition tr = cv_transition(model);
    std::vector<SpdMatrix> out;
    out.reserve(trajectory.size());
    Matrix P = P0.entries();
    for (const Vector& x : trajectory) {
        P = tr.F * P * tr.F.transpose() + tr.Q;
        Matrix J = SpdMatrix(0.5 * (P + P.transpose())).inverse();
        for (const auto& s : sensors) {
            const Matrix H = measurement_jacobian(s, x);
            J += H.transpose() * s.R.inverse() * H;
        }
        P = SpdMatrix(0.5 * (J + J.transpose())).inverse();
        out.emplace_back(P);
    }
    return out;
}

}  // namespace wishtrack
