#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "duomode/analytic.hpp"
#include "duomode/dynamics.hpp"
#include "duomode/model.hpp"

using namespace duomode;

namespace {

std::mt19937_64 rng(777);

SystemParams random_stable_params() {
    std::uniform_real_distribution<double> ug(0.0, 1.6), ul(0.0, 3.0), uphi(0.0, 6.3);
    while (true) {
        const double g = ug(rng), l = ul(rng);
        if (1.0 + l * l - g * g > 0.05) return {1.0, g, l, uphi(rng)};
    }
}

ReservoirSpec random_reservoir() {
    std::uniform_real_distribution<double> un(0.0, 3.0), uf(0.0, 1.0);
    const double n = un(rng);
    return {n, uf(rng) * std::sqrt(n * (n + 1.0))};
}

double slowest_gap(const SystemParams& p) {
    const auto info = classify_regime(p);
    return info.regime == Regime::Exponential ? p.kappa() * (1.0 - info.alpha) : p.kappa();
}

// Reference integrator for dx/dt = A x (classic RK4, small fixed step).
Vec4 integrate_linear(const Mat4& a, Vec4 x, double t, double h) {
    const auto n = static_cast<long>(std::llround(t / h));
    for (long s = 0; s < n; ++s) {
        const Vec4 k1 = a * x;
        const Vec4 k2 = a * (x + 0.5 * h * k1);
        const Vec4 k3 = a * (x + 0.5 * h * k2);
        const Vec4 k4 = a * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

}  // namespace

TEST_CASE("lyapunov: decoupled thermal fixed point") {
    const double kappa = 1.3, n = 0.7;
    const Mat4 a = -kappa * Mat4::Identity();
    const Mat4 d = 2.0 * kappa * (0.5 + n) * Mat4::Identity();
    const Mat4 sigma = steady_state_lyapunov(a, d);
    CHECK((sigma - (0.5 + n) * Mat4::Identity()).norm() < 1e-14);
}

TEST_CASE("lyapunov: thermal variances match frozen closed-form values") {
    // kappa=1, g=0.5, lambda=0.2, n=0.3, m=0: var_x/var_y from the thermal
    // closed form with S = 1/0.79.
    const SystemParams p{1.0, 0.5, 0.2, 0.0};
    const ReservoirSpec r = ReservoirSpec::thermal(0.3);
    const Mat4 sigma = steady_state_lyapunov(drift_matrix(p), diffusion_matrix(p, r));
    CHECK(sigma(kXa, kXa) == doctest::Approx(0.951898734177215).epsilon(1e-12));
    CHECK(sigma(kXb, kXb) == doctest::Approx(0.951898734177215).epsilon(1e-12));
    CHECK(sigma(kYa, kYa) == doctest::Approx(1.154430379746835).epsilon(1e-12));
    CHECK(sigma(kYb, kYb) == doctest::Approx(1.154430379746835).epsilon(1e-12));
}

TEST_CASE("lyapunov: full-report equivalence at an oscillatory squeezed point") {
    const SystemParams p{1.0, 0.6, 1.0, M_PI / 3.0};
    const ReservoirSpec r{0.5, std::sqrt(0.75)};
    const Mat4 sigma = steady_state_lyapunov(drift_matrix(p), diffusion_matrix(p, r));
    const SteadyStateReport num = report_from_covariance(sigma);
    const SteadyStateReport ana = steady_state_report(p, r);
    const auto close = [](double a, double b) {
        return std::abs(a - b) <= std::max(1e-12, 1e-9 * std::max(std::abs(a), std::abs(b)));
    };
    CHECK(close(num.var_xa, ana.var_xa));
    CHECK(close(num.var_ya, ana.var_ya));
    CHECK(close(num.var_xb, ana.var_xb));
    CHECK(close(num.var_yb, ana.var_yb));
    CHECK(close(num.xy_a, ana.xy_a));
    CHECK(close(num.xy_b, ana.xy_b));
    CHECK(close(num.pop_a, ana.pop_a));
    CHECK(close(num.pop_b, ana.pop_b));
    CHECK(std::abs(num.corr_aa - ana.corr_aa) < 1e-10);
    CHECK(std::abs(num.corr_bb - ana.corr_bb) < 1e-10);
    CHECK(std::abs(num.corr_ab - ana.corr_ab) < 1e-10);
    CHECK(std::abs(num.corr_adag_b - ana.corr_adag_b) < 1e-10);
    CHECK(close(num.eta_aa, ana.eta_aa));
    CHECK(close(num.eta_bb, ana.eta_bb));
    CHECK(close(num.gamma_ab, ana.gamma_ab));
    CHECK(close(num.eta_ab, ana.eta_ab));
}

TEST_CASE("lyapunov: residual bound and errors") {
    for (int i = 0; i < 100; ++i) {
        const SystemParams p = random_stable_params();
        const Mat4 a = drift_matrix(p);
        const Mat4 d = diffusion_matrix(p, random_reservoir());
        const Mat4 sigma = steady_state_lyapunov(a, d);
        const double resid = (a * sigma + sigma * a.transpose() + d).norm();
        CHECK(resid <= 1e-11 * (a.norm() * sigma.norm() + d.norm()));
        CHECK((sigma - sigma.transpose()).norm() < 1e-12 * sigma.norm());
    }
    CHECK_THROWS_AS(
        steady_state_lyapunov(drift_matrix({1.0, 1.5, 0.0, 0.0}), Mat4::Identity()),
        instability_error);
}

TEST_CASE("evolve_covariance basics") {
    const SystemParams p{1.0, 0.4, 0.7, 0.9};
    const Mat4 a = drift_matrix(p);
    const Mat4 d = diffusion_matrix(p, ReservoirSpec::thermal(0.2));
    SUBCASE("t = 0 returns sigma0") {
        const Mat4 s0 = 0.5 * Mat4::Identity() + 0.01 * Mat4::Ones();
        CHECK((evolve_covariance(a, d, s0, 0.0, 1e-2) - s0).norm() == 0.0);
    }
    SUBCASE("vacuum fixed point is stationary") {
        const Mat4 av = -Mat4::Identity();
        const Mat4 dv = Mat4::Identity();
        const Mat4 s = evolve_covariance(av, dv, 0.5 * Mat4::Identity(), 7.0, 1e-2);
        CHECK((s - 0.5 * Mat4::Identity()).norm() < 1e-13);
    }
    SUBCASE("step-size guard") {
        CHECK_THROWS_AS(evolve_covariance(a, d, Mat4::Identity(), 1.0, 1.0),
                        step_size_error);
    }
}

TEST_CASE("evolve_covariance relaxes to the Lyapunov solution") {
    for (int i = 0; i < 10; ++i) {
        const SystemParams p = random_stable_params();
        const Mat4 a = drift_matrix(p);
        const Mat4 d = diffusion_matrix(p, random_reservoir());
        const Mat4 target = steady_state_lyapunov(a, d);
        const double t = 35.0 / slowest_gap(p);
        const double dt = 0.05 / a.cwiseAbs().rowwise().sum().maxCoeff();
        const Mat4 s = evolve_covariance(a, d, 0.5 * Mat4::Identity(), t, dt);
        CHECK((s - target).norm() < 1e-8);
    }
}

TEST_CASE("monotone relaxation beyond the slowest time constant") {
    for (int i = 0; i < 6; ++i) {
        const SystemParams p = random_stable_params();
        const Mat4 a = drift_matrix(p);
        const Mat4 d = diffusion_matrix(p, random_reservoir());
        const Mat4 target = steady_state_lyapunov(a, d);
        const double tau = 1.0 / slowest_gap(p);
        const double dt = 0.05 / a.cwiseAbs().rowwise().sum().maxCoeff();
        Mat4 s = evolve_covariance(a, d, 0.5 * Mat4::Identity(), tau, dt);
        double prev = (s - target).norm();
        for (int k = 0; k < 8; ++k) {
            s = evolve_covariance(a, d, s, 0.5 * tau, dt);
            const double cur = (s - target).norm();
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("propagate_mean: zero stays zero") {
    const auto info = classify_regime({1.0, 0.7, 0.3, 0.0});
    CHECK(propagate_mean(info, Vec4::Zero(), 3.0).norm() == 0.0);
}

TEST_CASE("propagate_mean: unidirectional coupling at the EP") {
    // At g = lambda the X quadratures evolve independently of Y: a pure-Y
    // displacement never reaches X, while a pure-X displacement drives the
    // partner Y with weight -(g + lambda) t.
    const SystemParams p{1.0, 0.6, 0.6, 0.0};
    const auto info = classify_regime(p);
    const double t = 1.7;
    Vec4 y0 = Vec4::Zero();
    y0(kYa) = 1.0;
    y0(kYb) = -2.0;
    const Vec4 yt = propagate_mean(info, y0, t);
    CHECK(yt(kXa) == 0.0);
    CHECK(yt(kXb) == 0.0);
    CHECK(yt(kYa) == doctest::Approx(std::exp(-t)).epsilon(1e-14));

    Vec4 x0 = Vec4::Zero();
    x0(kXa) = 1.0;
    const Vec4 xt = propagate_mean(info, x0, t);
    CHECK(xt(kXa) == doctest::Approx(std::exp(-t)).epsilon(1e-14));
    CHECK(xt(kYb) == doctest::Approx(-1.2 * t * std::exp(-t)).epsilon(1e-13));
    CHECK(xt(kYa) == 0.0);
    CHECK(xt(kXb) == 0.0);
}

TEST_CASE("propagate_mean: oscillatory block rotation example") {
    // kappa=1, g=0, lambda=1: (X_a, Y_b) undergoes a damped rotation, so at
    // t = pi the X_a displacement maps to -e^{-pi}.
    const auto info = classify_regime({1.0, 0.0, 1.0, 0.0});
    Vec4 x0 = Vec4::Zero();
    x0(kXa) = 1.0;
    const Vec4 xt = propagate_mean(info, x0, M_PI);
    CHECK(xt(kXa) == doctest::Approx(-std::exp(-M_PI)).epsilon(1e-12));
    CHECK(std::abs(xt(kYb)) < 1e-12);
    CHECK(xt(kXb) == 0.0);
    CHECK(xt(kYa) == 0.0);
}

TEST_CASE("propagate_mean matches the explicit root/factor combinations") {
    SUBCASE("exponential: cosh/sinh combination with factor u") {
        const SystemParams p{1.0, 0.9, 0.3, 0.0};
        const auto info = classify_regime(p);
        std::uniform_real_distribution<double> ux(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            Vec4 x0;
            for (int k = 0; k < 4; ++k) x0(k) = ux(rng);
            const double t = 0.3 * i;
            const Vec4 xt = propagate_mean(info, x0, t);
            const double p1 = (info.p1.real()) * p.kappa();
            const double p2 = (info.p2.real()) * p.kappa();
            const double u = info.u;
            const double xa = 0.5 * ((x0(kXa) - u * x0(kYb)) * std::exp(p1 * t) +
                                     (x0(kXa) + u * x0(kYb)) * std::exp(p2 * t));
            const double yb = (0.5 / u) * (-(x0(kXa) - u * x0(kYb)) * std::exp(p1 * t) +
                                           (x0(kXa) + u * x0(kYb)) * std::exp(p2 * t));
            CHECK(xt(kXa) == doctest::Approx(xa).epsilon(1e-11));
            CHECK(xt(kYb) == doctest::Approx(yb).epsilon(1e-11));
        }
    }
    SUBCASE("oscillatory: cos/sin combination with factor w") {
        const SystemParams p{1.0, 0.4, 1.1, 0.0};
        const auto info = classify_regime(p);
        const std::complex<double> i1(0.0, 1.0);
        std::uniform_real_distribution<double> ux(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            Vec4 x0;
            for (int k = 0; k < 4; ++k) x0(k) = ux(rng);
            const double t = 0.25 * i;
            const Vec4 xt = propagate_mean(info, x0, t);
            const std::complex<double> e3 = std::exp(info.p1 * p.kappa() * t);
            const std::complex<double> e4 = std::exp(info.p2 * p.kappa() * t);
            const double w = info.w;
            const std::complex<double> xa =
                0.5 * ((x0(kXa) - i1 * w * x0(kYb)) * e3 + (x0(kXa) + i1 * w * x0(kYb)) * e4);
            const std::complex<double> yb =
                (i1 / (2.0 * w)) *
                ((x0(kXa) - i1 * w * x0(kYb)) * e3 - (x0(kXa) + i1 * w * x0(kYb)) * e4);
            CHECK(std::abs(xa.imag()) < 1e-12);
            CHECK(xt(kXa) == doctest::Approx(xa.real()).epsilon(1e-11));
            CHECK(xt(kYb) == doctest::Approx(yb.real()).epsilon(1e-11));
        }
    }
}

TEST_CASE("propagate_mean vs numerically integrated dx/dt = Ax") {
    for (int i = 0; i < 12; ++i) {
        SystemParams p = random_stable_params();
        if (i == 0) p = SystemParams{1.0, 0.8, 0.8, 0.0};  // include the EP
        const auto info = classify_regime(p);
        const Mat4 a = drift_matrix(p);
        std::uniform_real_distribution<double> ux(-1.5, 1.5);
        Vec4 x0;
        for (int k = 0; k < 4; ++k) x0(k) = ux(rng);
        for (double t : {0.5, 2.0, 7.5, 20.0}) {
            const Vec4 exact = propagate_mean(info, x0, t);
            const Vec4 num = integrate_linear(a, x0, t, 2.5e-4);
            CHECK((exact - num).norm() < 1e-10);
        }
    }
}

TEST_CASE("report_from_covariance examples") {
    SUBCASE("vacuum: moments zero, degrees undefined") {
        const Mat4 vac = 0.5 * Mat4::Identity();
        CHECK_THROWS_AS(report_from_covariance(vac), degenerate_population_error);
        const SteadyStateReport rep = moments_from_covariance(vac);
        CHECK(rep.pop_a == 0.0);
        CHECK(rep.pop_b == 0.0);
        CHECK(std::abs(rep.corr_aa) == 0.0);
        CHECK(std::abs(rep.corr_ab) == 0.0);
        CHECK_FALSE(rep.degrees_defined);
    }
    SUBCASE("n=1 thermal: populations (1,1), correlators zero") {
        const Mat4 th = 1.5 * Mat4::Identity();
        const SteadyStateReport rep = report_from_covariance(th);
        CHECK(rep.pop_a == doctest::Approx(1.0));
        CHECK(rep.pop_b == doctest::Approx(1.0));
        CHECK(std::abs(rep.corr_aa) == 0.0);
        CHECK(std::abs(rep.corr_bb) == 0.0);
        CHECK(std::abs(rep.corr_ab) == 0.0);
        CHECK(std::abs(rep.corr_adag_b) == 0.0);
        CHECK(rep.eta_aa == doctest::Approx(-1.0));
    }
}

TEST_CASE("symplectic physicality margin") {
    CHECK(symplectic_min_eigenvalue(0.5 * Mat4::Identity()) == doctest::Approx(0.0));
    CHECK(symplectic_min_eigenvalue(0.4 * Mat4::Identity()) ==
          doctest::Approx(-0.1).epsilon(1e-12));
    for (int i = 0; i < 50; ++i) {
        const SystemParams p = random_stable_params();
        const Mat4 sigma =
            steady_state_lyapunov(drift_matrix(p), diffusion_matrix(p, random_reservoir()));
        CHECK(symplectic_min_eigenvalue(sigma) >= -1e-10);
    }
}
