#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "wishtrack/numerics.hpp"

using namespace wishtrack;

TEST_CASE("cholesky examples") {
    CHECK(cholesky(Matrix::Identity(2, 2)).isApprox(Matrix::Identity(2, 2)));

    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 8.0, 2.0;
    const Matrix L = cholesky(d);
    CHECK(L(0, 0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
    CHECK(L(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(L(1, 0) == 0.0);

    Matrix P(2, 2);
    P << 8, 1, 1, 2;
    const Matrix Lp = cholesky(P);
    CHECK((Lp * Lp.transpose() - P).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(Lp(0, 1) == 0.0);
}

TEST_CASE("cholesky rejects indefinite input and jitters semidefinite input") {
    Matrix bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(cholesky(bad), NotPositiveDefinite);

    Matrix psd(2, 2);
    psd << 1, 1, 1, 1;
    const Matrix L = cholesky(psd);
    CHECK((L * L.transpose() - psd).norm() <= 1e-10 * psd.norm());

    CHECK_THROWS_AS(SpdMatrix(Matrix::Zero(2, 3)), DimensionMismatch);
    Matrix asym(2, 2);
    asym << 1, 0.5, 0.4, 1;
    CHECK_THROWS_AS(SpdMatrix{asym}, DomainError);
}

TEST_CASE("property: cholesky round trip on random SPD matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 8;
        const Matrix P = oracle::random_spd(n, rng);
        const SpdMatrix S(P);
        const Matrix& L = S.chol();
        CHECK((L * L.transpose() - P).norm() <= 1e-10 * P.norm());
        CHECK(L.isLowerTriangular());
    }
}

TEST_CASE("cached factor is computed once under concurrent access") {
    std::mt19937_64 rng(3);
    const SpdMatrix S(oracle::random_spd(6, rng));
    std::vector<const double*> seen(8);
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { seen[t] = S.chol().data(); });
    for (auto& th : pool) th.join();
    for (const double* p : seen) CHECK(p == seen.front());
}

TEST_CASE("sym_eig examples") {
    Matrix A(2, 2);
    A << 1, 0.25, 0.25, 1;
    const EigenSpectrum s = sym_eig(A);
    CHECK(s.values(0) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(s.values(1) == doctest::Approx(0.75).epsilon(1e-14));

    const EigenSpectrum id = sym_eig(Matrix::Identity(4, 4));
    for (int i = 0; i < 4; ++i) CHECK(id.values(i) == 1.0);

    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3, 1, 2;
    const EigenSpectrum sd = sym_eig(d);
    CHECK(sd.values(0) == 3.0);
    CHECK(sd.values(1) == 2.0);
    CHECK(sd.values(2) == 1.0);
    CHECK(std::abs(sd.vectors(1, 2)) == 1.0);
}

TEST_CASE("property: eigendecomposition reconstruction, residuals and ordering") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 8;
        const Matrix S = oracle::random_symmetric(n, rng);
        const EigenSpectrum e = sym_eig(S);
        const double norm = S.norm();
        Matrix rec = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            rec += e.values(i) * e.vectors.col(i) * e.vectors.col(i).transpose();
            CHECK((S * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() <= 1e-9 * norm);
            if (i > 0) CHECK(e.values(i - 1) >= e.values(i));
        }
        CHECK((rec - S).norm() <= 1e-9 * norm);
        CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
        // Independent solver agrees on the spectrum.
        Eigen::SelfAdjointEigenSolver<Matrix> ref(S);
        CHECK(std::abs(ref.eigenvalues()(n - 1) - e.max()) <= 1e-10 * norm);
        CHECK(std::abs(ref.eigenvalues()(0) - e.min()) <= 1e-10 * norm);
    }
}

TEST_CASE("ln_gamma") {
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0));
    CHECK(std::abs(ln_gamma(1.0)) < 1e-15);
    CHECK(ln_gamma(0.5) == doctest::Approx(std::log(std::sqrt(std::numbers::pi))).epsilon(1e-12));
    CHECK(ln_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-12));
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
}

TEST_CASE("reg_inc_gamma examples") {
    CHECK(reg_inc_gamma(1.0, 0.0, kInf) == 1.0);
    CHECK(reg_inc_gamma(1.0, 0.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));

    // Simpson oracle of t^{z-1} e^{-t} / Gamma(z) on [0.5, 3].
    const double z = 2.5;
    const double ref = oracle::simpson([&](double t) { return std::pow(t, z - 1.0) * std::exp(-t); }, 0.5, 3.0) /
                       std::tgamma(z);
    CHECK(std::abs(reg_inc_gamma(z, 0.5, 3.0) - ref) <= 1e-10);

    CHECK_THROWS_AS(reg_inc_gamma(0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(reg_inc_gamma(1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(reg_inc_gamma(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("property: reg_inc_gamma is additive over adjacent intervals") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double z = 0.2 + 60.0 * U(rng);
        double v[3] = {80.0 * U(rng), 80.0 * U(rng), 80.0 * U(rng)};
        std::sort(v, v + 3);
        const double lhs = reg_inc_gamma(z, v[0], v[1]) + reg_inc_gamma(z, v[1], v[2]);
        CHECK(std::abs(lhs - reg_inc_gamma(z, v[0], v[2])) <= 1e-10);
        const double r = reg_inc_gamma(z, v[0], v[2]);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("multivariate_ln_gamma") {
    CHECK(multivariate_ln_gamma(1, 3.0) == doctest::Approx(ln_gamma(3.0)).epsilon(1e-14));
    const double lp = std::log(std::numbers::pi);
    CHECK(multivariate_ln_gamma(2, 2.0) ==
          doctest::Approx(0.5 * lp + std::lgamma(2.0) + std::lgamma(1.5)).epsilon(1e-13));
    CHECK(multivariate_ln_gamma(3, 5.0) ==
          doctest::Approx(1.5 * lp + std::lgamma(5.0) + std::lgamma(4.5) + std::lgamma(4.0)).epsilon(1e-13));
    CHECK_THROWS_AS(multivariate_ln_gamma(3, 1.0), DomainError);
    CHECK_THROWS_AS(multivariate_ln_gamma(0, 1.0), DomainError);
}

TEST_CASE("integrate_tail") {
    CHECK(integrate_tail([](double x) { return 1.0 - oracle::chi2_cdf_series(x, 1.0); }, 60.0) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_tail([](double x) { return std::exp(-x); }, 40.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_tail([](double x) { return 1.0 - oracle::chi2_cdf_series(x, 5.0); }, 90.0) ==
          doctest::Approx(5.0).epsilon(1e-8));
    CHECK_THROWS_AS(integrate_tail([](double x) { return std::exp(-x); }, 5.0), TailNotDecayed);
}

TEST_CASE("invert_monotone") {
    CHECK(invert_monotone([](double x) { return oracle::chi2_cdf_even(x, 2); }, 0.5) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(invert_monotone([](double x) { return std::min(x, 1.0); }, 0.3) == doctest::Approx(0.3).epsilon(1e-12));

    // Quadrature-inversion oracle for chi2_4 at 0.995.
    const auto F_quad = [](double x) { return oracle::simpson([](double t) { return oracle::chi2_density(t, 4); }, 0, x); };
    const double ref = oracle::bisect([&](double x) { return F_quad(x) - 0.995; }, 0.0, 50.0, 80);
    const double got = invert_monotone([](double x) { return oracle::chi2_cdf_even(x, 4); }, 0.995);
    CHECK(std::abs(got - ref) <= 1e-8);

    CHECK_THROWS_AS(invert_monotone([](double) { return 0.0; }, 0.5), BracketFailure);
    CHECK_THROWS_AS(invert_monotone([](double) { return 0.9; }, 0.5), BracketFailure);
    CHECK_THROWS_AS(invert_monotone([](double x) { return x; }, 1.0), DomainError);
}

TEST_CASE("property: invert_monotone is a right inverse") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(0.001, 0.999);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 * (1 + trial % 10);
        const double p = U(rng);
        const auto F = [k](double x) { return oracle::chi2_cdf_even(x, k); };
        CHECK(std::abs(F(invert_monotone(F, p)) - p) <= 1e-10);
    }
    CHECK(chi2_quantile(0.995, 4.0) == doctest::Approx(invert_monotone([](double x) { return oracle::chi2_cdf_even(x, 4); }, 0.995)).epsilon(1e-12));
}

TEST_CASE("log_pfaffian") {
    Matrix A2(2, 2);
    A2 << 0, -3, 3, 0;
    const LogPfaffian p2 = log_pfaffian(A2);
    CHECK(p2.sign == -1);
    CHECK(std::exp(p2.log_abs) == doctest::Approx(3.0).epsilon(1e-15));

    std::mt19937_64 rng(29);
    std::normal_distribution<double> N(0.0, 1.0);
    Matrix A4 = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            A4(i, j) = N(rng);
            A4(j, i) = -A4(i, j);
        }
    const double explicit_pf = A4(0, 1) * A4(2, 3) - A4(0, 2) * A4(1, 3) + A4(0, 3) * A4(1, 2);
    const LogPfaffian p4 = log_pfaffian(A4);
    CHECK(p4.sign * std::exp(p4.log_abs) == doctest::Approx(explicit_pf).epsilon(1e-12));

    for (int n : {6, 8}) {
        Matrix A = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                A(i, j) = N(rng);
                A(j, i) = -A(i, j);
            }
        const LogPfaffian p = log_pfaffian(A);
        CHECK(2.0 * p.log_abs == doctest::Approx(std::log(std::abs(A.determinant()))).epsilon(1e-10));
    }
    CHECK(log_pfaffian(Matrix::Zero(3, 3)).sign == 0);
}
