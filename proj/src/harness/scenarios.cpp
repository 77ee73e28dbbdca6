// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/harness/scenarios.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "wishtrack/fusion.hpp"
#include "wishtrack/harness/montecarlo.hpp"
#include "wishtrack/harness/rng.hpp"
#include "wishtrack/measures.hpp"
#include "wishtrack/tracking.hpp"

namespace wishtrack {

namespace {

constexpr double kHistogramWidth = 0.5;
constexpr int kHistogramBins = 24;

struct StepBands {
    ConfidenceBand wishart;
    ConfidenceBand chi2;
};

StepBands bands_for(Eigen::Index dim, std::size_t count, double p) {
    return {conservativeness_band(dim, count, p), chi2_band(dim, count, p)};
}

TimeSeriesRow make_row(int k, const EigenSpectrum& s, const StepBands& b, double scalar) {
    TimeSeriesRow r;
    r.k = k;
    r.lambda_min = s.min();
    r.lambda_mean = s.mean();
    r.lambda_max = s.max();
    r.band_lower = b.wishart.lower;
    r.band_upper = b.wishart.upper;
    r.chi2_lower = b.chi2.lower;
    r.chi2_upper = b.chi2.upper;
    r.scalar = scalar;
    return r;
}

Vector standard_normal(std::size_t n, CounterRng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    return v;
}

Vector initial_truth(const ScenarioConfig& c) {
    Vector x(kCvDim);
    x << c.target_x, c.target_y, c.target_vx, c.target_vy;
    return x;
}

// x0_hat ~ N(x0, P0)
FilterState initial_estimate(const Vector& x0, const SpdMatrix& P0, CounterRng& rng) {
    FilterState s;
    s.estimate.x = x0 + P0.chol() * standard_normal(kCvDim, rng);
    s.estimate.P = P0;
    return s;
}

SpdMatrix initial_covariance(double sigma_pos, double v_max) {
    Vector d(kCvDim);
    d << sigma_pos * sigma_pos, sigma_pos * sigma_pos, v_max * v_max, v_max * v_max;
    return SpdMatrix(Matrix(d.asDiagonal()));
}

}  // namespace

MotivatingResult run_motivating_example(const ScenarioConfig& c) {
    c.validate();
    Matrix sigma(2, 2);
    sigma << 8.0, 1.0, 1.0, 2.0;
    const SpdMatrix Sigma(sigma);
    Matrix p = Matrix::Zero(2, 2);
    p.diagonal() << 8.0, 2.0;
    const SpdMatrix P(p);
    const Matrix& Ls = Sigma.chol();
    const int H = c.horizon;

    struct Run {
        std::vector<Vector> errors;
    };
    std::vector<NormalizedSquareStat> stats(static_cast<std::size_t>(H), NormalizedSquareStat(2));
    std::vector<double> nees(static_cast<std::size_t>(H), 0.0);
    std::vector<double> counts(kHistogramBins, 0.0);
    std::vector<CredibilityRun> last_step;
    last_step.reserve(c.mc);
    double total = 0.0;

    monte_carlo(
        c.mc, c.workers,
        [&](std::size_t i) {
            Run r;
            for (int k = 1; k <= H; ++k) {
                CounterRng rng(c.seed, i, static_cast<std::uint64_t>(k));
                r.errors.push_back(Ls * standard_normal(2, rng));
            }
            return r;
        },
        [&](std::size_t, Run&& r) {
            for (int k = 1; k <= H; ++k) {
                const Vector& e = r.errors[static_cast<std::size_t>(k - 1)];
                const Vector z = normalized_error(e, P);
                stats[static_cast<std::size_t>(k - 1)].accumulate_normalized(z);
                const double q = z.squaredNorm();
                nees[static_cast<std::size_t>(k - 1)] += q;
                const auto bin = static_cast<long>(std::floor(q / kHistogramWidth));
                if (bin >= 0 && bin < kHistogramBins) counts[static_cast<std::size_t>(bin)] += 1.0;
                total += 1.0;
            }
            last_step.push_back({r.errors.back(), P, Sigma});
        });

    MotivatingResult out;
    out.nees.name = "motivating_nees";
    out.nees.scalar_name = "nees_over_dim";
    const StepBands bands = bands_for(2, c.mc, c.p);
    out.nees.band_method = bands.wishart.method;
    for (int k = 1; k <= H; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        out.nees.rows.push_back(make_row(k, stats[idx].spectrum(), bands, nees[idx] / static_cast<double>(c.mc) / 2.0));
    }

    out.histogram.name = "motivating_histogram";
    out.histogram.header = {"bin_lower", "bin_upper", "empirical_density", "chi2_density"};
    for (int b = 0; b < kHistogramBins; ++b) {
        const double lo = b * kHistogramWidth, hi = lo + kHistogramWidth;
        const double emp = counts[static_cast<std::size_t>(b)] / (total * kHistogramWidth);
        const double ref = (chi2_cdf(hi, 2.0) - chi2_cdf(lo, 2.0)) / kHistogramWidth;
        out.histogram_sup_error = std::max(out.histogram_sup_error, std::abs(emp - ref));
        out.histogram.rows.push_back({lo, hi, emp, ref});
    }
    out.interval = credibility_interval(Sigma, P);
    out.coin = coin(Sigma, P);
    out.nci = nci(last_step);
    return out;
}

SwitchingResult run_switching(const ScenarioConfig& c) {
    c.validate();
    const int H = c.horizon;
    const CvModel filter_model{c.T, c.q, NoiseVariant::SampleHold, 1.0};
    const CvModel central_model{c.T, c.q, NoiseVariant::Switching, 1.0};
    const Transition filter_tr = cv_transition(filter_model);
    const SensorModel sensor = SensorModel::linear_position(c.sigma_v);
    const SpdMatrix P0 = initial_covariance(c.sigma_v, c.v_max);
    const Vector x0 = initial_truth(c);

    struct Step {
        Vector z_nees;
        Vector z_nis;
        double nees;
        double nis;
    };
    std::vector<NormalizedSquareStat> nees_stats(static_cast<std::size_t>(H), NormalizedSquareStat(4));
    std::vector<NormalizedSquareStat> nis_stats(static_cast<std::size_t>(H), NormalizedSquareStat(2));
    std::vector<double> nees_sum(static_cast<std::size_t>(H), 0.0), nis_sum(static_cast<std::size_t>(H), 0.0);

    monte_carlo(
        c.mc, c.workers,
        [&](std::size_t i) {
            std::vector<Step> steps;
            CounterRng init(c.seed, i, 0);
            FilterState f = initial_estimate(x0, P0, init);
            Vector x = x0;
            for (int k = 1; k <= H; ++k) {
                CounterRng rng(c.seed, i, static_cast<std::uint64_t>(k));
                const Transition tr = k <= c.k_switch ? filter_tr
                                                      : cv_transition(central_model, Eigen::Vector2d(x(2), x(3)));
                x = propagate_truth(tr, x, rng);
                const Vector y = simulate_measurement(sensor, x, rng);
                f = kf_predict(f, filter_tr.F, filter_tr.Q);
                f = sensor_update(f, y, sensor);
                const Vector zx = normalized_error(f.estimate.x - x, f.estimate.P);
                const Vector zy = normalized_error(f.innovation->x, f.innovation->P);
                steps.push_back({zx, zy, zx.squaredNorm(), zy.squaredNorm()});
            }
            return steps;
        },
        [&](std::size_t, std::vector<Step>&& steps) {
            for (std::size_t k = 0; k < steps.size(); ++k) {
                nees_stats[k].accumulate_normalized(steps[k].z_nees);
                nis_stats[k].accumulate_normalized(steps[k].z_nis);
                nees_sum[k] += steps[k].nees;
                nis_sum[k] += steps[k].nis;
            }
        });

    SwitchingResult out;
    out.nees.name = "switching_nees";
    out.nis.name = "switching_nis";
    out.nis.scalar_name = "nis";
    const StepBands b4 = bands_for(4, c.mc, c.p), b2 = bands_for(2, c.mc, c.p);
    out.nees.band_method = b4.wishart.method;
    out.nis.band_method = b2.wishart.method;
    const double M = static_cast<double>(c.mc);
    for (int k = 1; k <= H; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        out.nees.rows.push_back(make_row(k, nees_stats[idx].spectrum(), b4, nees_sum[idx] / M));
        out.nis.rows.push_back(make_row(k, nis_stats[idx].spectrum(), b2, nis_sum[idx] / M));
    }
    return out;
}

FusionDesignResult run_fusion_design(const ScenarioConfig& c) {
    c.validate();
    const int H = c.horizon;
    const CvModel model{c.T, c.q, NoiseVariant::WhiteNoiseJerkless, 1.0};
    const Transition tr = cv_transition(model);
    const double sigma_phi = c.sigma_phi_deg * std::numbers::pi / 180.0;
    const std::vector<SensorModel> sensors = {SensorModel::polar({-c.sensor_x, 0.0}, c.sigma_r, sigma_phi),
                                              SensorModel::polar({c.sensor_x, 0.0}, c.sigma_r, sigma_phi)};
    const SpdMatrix P0 = initial_covariance(c.sigma_r, c.v_max);

    // The target follows the noiseless constant-velocity path in every run.
    std::vector<Vector> truth;
    truth.reserve(static_cast<std::size_t>(H));
    Vector x = initial_truth(c);
    for (int k = 1; k <= H; ++k) {
        x = tr.F * x;
        truth.push_back(x);
    }
    const std::vector<SpdMatrix> crlb = crlb_recursion(model, sensors, truth, P0);

    constexpr int kArms = 3;  // LKF, CI, LE
    struct Step {
        std::array<Vector, kArms> z;
        std::array<double, kArms> trace;
    };
    std::array<std::vector<NormalizedSquareStat>, kArms> stats;
    std::array<std::vector<double>, kArms> trace_sum, nees_sum;
    for (int a = 0; a < kArms; ++a) {
        stats[a].assign(static_cast<std::size_t>(H), NormalizedSquareStat(4));
        trace_sum[a].assign(static_cast<std::size_t>(H), 0.0);
        nees_sum[a].assign(static_cast<std::size_t>(H), 0.0);
    }

    monte_carlo(
        c.mc, c.workers,
        [&](std::size_t i) {
            CounterRng init(c.seed, i, 0);
            const Vector x0 = initial_truth(c);
            const FilterState s1 = initial_estimate(x0, P0, init);
            const FilterState s2 = initial_estimate(x0, P0, init);
            std::array<std::array<FilterState, 2>, kArms> agents;
            for (auto& pair : agents) pair = {s1, s2};

            std::vector<Step> steps(static_cast<std::size_t>(H));
            for (int k = 1; k <= H; ++k) {
                const Vector& xk = truth[static_cast<std::size_t>(k - 1)];
                CounterRng rng(c.seed, i, static_cast<std::uint64_t>(k));
                const std::array<Vector, 2> y = {simulate_measurement(sensors[0], xk, rng),
                                                 simulate_measurement(sensors[1], xk, rng)};
                Step& st = steps[static_cast<std::size_t>(k - 1)];
                for (int a = 0; a < kArms; ++a) {
                    auto& ag = agents[a];
                    for (int j = 0; j < 2; ++j) {
                        ag[j] = kf_predict(ag[j], tr.F, tr.Q);
                        ag[j] = ekf_update(ag[j], y[j], sensors[j]);
                    }
                    if (a > 0) {
                        // Odd k: agent 1 shares its track with agent 2; even k: the reverse.
                        const int sender = k % 2 == 1 ? 0 : 1;
                        const int receiver = 1 - sender;
                        const GaussianEstimate& mine = ag[receiver].estimate;
                        const GaussianEstimate& theirs = ag[sender].estimate;
                        const FusionResult fr = a == 1 ? fuse_ci(mine, theirs) : fuse_le(mine, theirs);
                        ag[receiver].estimate = fr.fused;
                    }
                    const GaussianEstimate& e = ag[0].estimate;
                    st.z[a] = normalized_error(e.x - xk, e.P);
                    st.trace[a] = e.P.trace();
                }
            }
            return steps;
        },
        [&](std::size_t, std::vector<Step>&& steps) {
            for (std::size_t k = 0; k < steps.size(); ++k) {
                for (int a = 0; a < kArms; ++a) {
                    stats[a][k].accumulate_normalized(steps[k].z[a]);
                    trace_sum[a][k] += steps[k].trace[a];
                    nees_sum[a][k] += steps[k].z[a].squaredNorm();
                }
            }
        });

    FusionDesignResult out;
    const std::array<TimeSeriesStat*, kArms> series = {&out.lkf, &out.ci, &out.le};
    const std::array<const char*, kArms> names = {"fusion_lkf", "fusion_ci", "fusion_le"};
    const StepBands bands = bands_for(4, c.mc, c.p);
    const double M = static_cast<double>(c.mc);
    out.rmt.name = "fusion_rmt";
    out.rmt.header = {"k", "crlb_rmt", "lkf", "ci", "le"};
    for (int a = 0; a < kArms; ++a) {
        series[a]->name = names[a];
        series[a]->extra_names = {"rmt", "rmt_over_crlb"};
        series[a]->band_method = bands.wishart.method;
    }
    for (int k = 1; k <= H; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        const double bound = std::sqrt(crlb[idx].trace());
        std::vector<double> rmt_row = {static_cast<double>(k), bound};
        for (int a = 0; a < kArms; ++a) {
            TimeSeriesRow row = make_row(k, stats[a][idx].spectrum(), bands, nees_sum[a][idx] / M);
            const double r = std::sqrt(trace_sum[a][idx] / M);
            row.extras = {r, r / bound};
            series[a]->rows.push_back(std::move(row));
            rmt_row.push_back(r / bound);
        }
        out.rmt.rows.push_back(std::move(rmt_row));
    }
    return out;
}

MismatchResult run_mismatch(const ScenarioConfig& c) {
    c.validate();
    const int H = c.horizon;
    const CvModel truth_model{c.T, c.q, NoiseVariant::Anisotropic, c.alpha_true};
    const CvModel filter_model{c.T, c.q, NoiseVariant::Anisotropic, c.alpha_filter};
    const Transition truth_tr = cv_transition(truth_model);
    const Transition filter_tr = cv_transition(filter_model);
    const SensorModel sensor = SensorModel::linear_position(c.sigma_v);
    const SpdMatrix P0 = initial_covariance(c.sigma_v, c.v_max);
    const Vector x0 = initial_truth(c);

    std::vector<StepBands> bands;
    for (int k = 2; k <= H; ++k) bands.push_back(bands_for(2, static_cast<std::size_t>(k), c.p));

    struct Step {
        Eigen::Vector3d lambda;  // min, mean, max
        double nis;
        bool out_w;
        bool out_chi2;
        bool has_theta;
        double theta;
    };
    const auto n_rows = static_cast<std::size_t>(H - 1);
    std::vector<Eigen::Vector3d> lambda_sum(n_rows, Eigen::Vector3d::Zero());
    std::vector<double> nis_sum(n_rows, 0.0), out_w(n_rows, 0.0), out_c(n_rows, 0.0);
    std::vector<double> theta_sum(n_rows, 0.0), theta_sq(n_rows, 0.0), theta_n(n_rows, 0.0);

    monte_carlo(
        c.mc, c.workers,
        [&](std::size_t i) {
            CounterRng init(c.seed, i, 0);
            FilterState f = initial_estimate(x0, P0, init);
            Vector x = x0;
            NormalizedSquareStat pi(2);
            std::vector<Step> steps;
            steps.reserve(n_rows);
            for (int k = 1; k <= H; ++k) {
                CounterRng rng(c.seed, i, static_cast<std::uint64_t>(k));
                x = propagate_truth(truth_tr, x, rng);
                const Vector y = simulate_measurement(sensor, x, rng);
                f = kf_predict(f, filter_tr.F, filter_tr.Q);
                f = sensor_update(f, y, sensor);
                pi.accumulate(f.innovation->x, f.innovation->P);
                if (k < 2) continue;
                const StepBands& b = bands[static_cast<std::size_t>(k - 2)];
                const EigenSpectrum s = pi.spectrum();
                Step st{};
                st.lambda = {s.min(), s.mean(), s.max()};
                st.nis = pi.mean().trace();
                st.out_w = h0_test(s, b.wishart).reject();
                st.out_chi2 = h0_test_mean(s, b.chi2).reject();
                try {
                    st.theta = mismatch_direction(s, f.innovation->P.chol()).theta_deg;
                    st.has_theta = true;
                } catch (const DegenerateSpectrum&) {
                    st.has_theta = false;
                }
                steps.push_back(st);
            }
            return steps;
        },
        [&](std::size_t, std::vector<Step>&& steps) {
            for (std::size_t j = 0; j < steps.size(); ++j) {
                const Step& st = steps[j];
                lambda_sum[j] += st.lambda;
                nis_sum[j] += st.nis;
                out_w[j] += st.out_w ? 1.0 : 0.0;
                out_c[j] += st.out_chi2 ? 1.0 : 0.0;
                if (st.has_theta) {
                    theta_sum[j] += st.theta;
                    theta_sq[j] += st.theta * st.theta;
                    theta_n[j] += 1.0;
                }
            }
        });

    MismatchResult out;
    out.nis.name = "mismatch_nis";
    out.nis.scalar_name = "nis";
    out.nis.extra_names = {"p_out_wishart", "p_out_chi2", "theta_mean_deg", "theta_std_deg"};
    const double M = static_cast<double>(c.mc);
    for (int k = 2; k <= H; ++k) {
        const auto j = static_cast<std::size_t>(k - 2);
        TimeSeriesRow r;
        r.k = k;
        r.lambda_min = lambda_sum[j](0) / M;
        r.lambda_mean = lambda_sum[j](1) / M;
        r.lambda_max = lambda_sum[j](2) / M;
        r.band_lower = bands[j].wishart.lower;
        r.band_upper = bands[j].wishart.upper;
        r.chi2_lower = bands[j].chi2.lower;
        r.chi2_upper = bands[j].chi2.upper;
        r.scalar = nis_sum[j] / M;
        const double n = theta_n[j];
        const double mean = n > 0 ? theta_sum[j] / n : NAN;
        const double var = n > 1 ? std::max(0.0, (theta_sq[j] - n * mean * mean) / (n - 1.0)) : NAN;
        r.extras = {out_w[j] / M, out_c[j] / M, mean, std::sqrt(var)};
        out.nis.rows.push_back(std::move(r));
    }
    return out;
}

std::vector<CsvTable> tables(const MotivatingResult& r) {
    CsvTable interval;
    interval.name = "motivating_interval";
    interval.header = {"lambda_min", "lambda_max", "coin", "nci"};
    interval.rows.push_back({r.interval.first, r.interval.second, r.coin, r.nci});
    return {to_table(r.nees), r.histogram, interval};
}

std::vector<CsvTable> tables(const SwitchingResult& r) { return {to_table(r.nees), to_table(r.nis)}; }

std::vector<CsvTable> tables(const FusionDesignResult& r) {
    return {to_table(r.lkf), to_table(r.ci), to_table(r.le), r.rmt};
}

std::vector<CsvTable> tables(const MismatchResult& r) {
    CsvTable detection, angle;
    detection.name = "mismatch_detection";
    detection.header = {"k", "p_out_wishart", "p_out_chi2"};
    angle.name = "mismatch_angle";
    angle.header = {"k", "theta_mean_deg", "theta_std_deg"};
    for (const auto& row : r.nis.rows) {
        detection.rows.push_back({static_cast<double>(row.k), row.extras[0], row.extras[1]});
        angle.rows.push_back({static_cast<double>(row.k), row.extras[2], row.extras[3]});
    }
    return {to_table(r.nis), detection, angle};
}

std::vector<CsvTable> run_scenario(const ScenarioConfig& config) {
    switch (config.scenario) {
        case Scenario::Motivating: return tables(run_motivating_example(config));
        case Scenario::Switching: return tables(run_switching(config));
        case Scenario::FusionDesign: return tables(run_fusion_design(config));
        case Scenario::Mismatch: return tables(run_mismatch(config));
    }
    throw ConfigError("unknown scenario");
}

CsvTable wishart_table(int m, int n_first, int n_last, int n_step, double p) {
    if (n_step < 1 || n_first < m || n_last < n_first) throw ConfigError("wishart table: invalid n range");
    if (!(p > 0.5 && p < 1.0)) throw ConfigError("wishart table: p must lie in (0.5, 1)");
    CsvTable t;
    t.name = "wishart_table";
    t.header = {"n", "e_lambda_min_over_n", "e_lambda_max_over_n", "q_lambda_min_over_n", "q_lambda_max_over_n"};
    for (int n = n_first; n <= n_last; n += n_step) {
        const WishartLaw law(m, n);
        const double dn = n;
        t.rows.push_back({dn, expected_lambda_min(law) / dn, expected_lambda_max(law) / dn,
                          quantile_lambda_min(law, 1.0 - p) / dn, quantile_lambda_max(law, p) / dn});
    }
    return t;
}

}  // namespace wishtrack
