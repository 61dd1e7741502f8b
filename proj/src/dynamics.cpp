#include "duomode/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace duomode {

namespace {

// Fixed enumeration of the 10 independent entries of a symmetric 4x4 matrix.
constexpr int kPairs[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                               {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};

int pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int lut[4][4] = {
        {0, 1, 2, 3}, {-1, 4, 5, 6}, {-1, -1, 7, 8}, {-1, -1, -1, 9}};
    return lut[i][j];
}

double max_real_eigenvalue(const Mat4& a) {
    Eigen::EigenSolver<Mat4> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

Mat4 lyapunov_rhs(const Mat4& a, const Mat4& d, const Mat4& sigma) {
    return a * sigma + sigma * a.transpose() + d;
}

// sinh(x)/x with a series fallback near zero.
double sinhc(double x) {
    if (std::abs(x) < 1e-5) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

}  // namespace

Mat4 steady_state_lyapunov(const Mat4& a, const Mat4& d) {
    if (max_real_eigenvalue(a) >= 0.0) {
        throw instability_error("steady_state_lyapunov: drift matrix is not strictly stable");
    }
    // Row for unknown pair (i,j): sum_k a(i,k) s(k,j) + a(j,k) s(k,i) = -d(i,j).
    Eigen::Matrix<double, 10, 10> m = Eigen::Matrix<double, 10, 10>::Zero();
    Eigen::Matrix<double, 10, 1> rhs;
    for (int r = 0; r < 10; ++r) {
        const int i = kPairs[r][0], j = kPairs[r][1];
        for (int k = 0; k < 4; ++k) {
            m(r, pair_index(k, j)) += a(i, k);
            m(r, pair_index(k, i)) += a(j, k);
        }
        rhs(r) = -d(i, j);
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 10, 10>> lu(m);
    if (!lu.isInvertible()) {
        throw singular_system_error("steady_state_lyapunov: vectorized system is rank-deficient");
    }
    const Eigen::Matrix<double, 10, 1> s = lu.solve(rhs);
    Mat4 sigma;
    for (int r = 0; r < 10; ++r) {
        sigma(kPairs[r][0], kPairs[r][1]) = s(r);
        sigma(kPairs[r][1], kPairs[r][0]) = s(r);
    }
    return sigma;
}

Mat4 evolve_covariance(const Mat4& a, const Mat4& d, const Mat4& sigma0, double t, double dt) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolve_covariance: t must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_covariance: dt must be > 0");
    const double anorm = a.cwiseAbs().rowwise().sum().maxCoeff();
    if (dt > 0.1 / anorm) {
        throw step_size_error("evolve_covariance: dt exceeds 0.1/||A||");
    }
    if (t == 0.0) return sigma0;

    const auto n_steps = static_cast<long>(std::ceil(t / dt - 1e-12));
    const double h = t / static_cast<double>(n_steps);
    Mat4 sigma = sigma0;
    for (long s = 0; s < n_steps; ++s) {
        const Mat4 k1 = lyapunov_rhs(a, d, sigma);
        const Mat4 k2 = lyapunov_rhs(a, d, sigma + 0.5 * h * k1);
        const Mat4 k3 = lyapunov_rhs(a, d, sigma + 0.5 * h * k2);
        const Mat4 k4 = lyapunov_rhs(a, d, sigma + h * k3);
        sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        sigma = 0.5 * (sigma + sigma.transpose().eval());
    }
    return sigma;
}

Vec4 propagate_mean(const RegimeInfo& regime, const Vec4& x0, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("propagate_mean: t must be >= 0");
    const double tau = regime.kappa * t;  // dimensionless time
    const double damp = std::exp(-tau);
    Vec4 x;
    // The dynamics splits into the pairs (X_a, Y_b) and (X_b, Y_a); within a
    // pair the X component couples to Y with weight -(g - lambda) and Y to X
    // with -(g + lambda).
    const auto pair = [&](int xi, int yj, double& xo, double& yo) {
        const double xv = x0(xi), yv = x0(yj);
        switch (regime.regime) {
            case Regime::Exponential: {
                const double ch = std::cosh(regime.alpha * tau);
                const double sh = std::sinh(regime.alpha * tau);
                xo = damp * (ch * xv - regime.u * sh * yv);
                // sinh(alpha tau)/u stays finite near the exceptional point:
                // evaluate as (gbar + lbar) * tau * sinhc(alpha tau).
                const double sh_over_u = regime.u > 1e-6
                    ? sh / regime.u
                    : (regime.gbar + regime.lbar) * tau * sinhc(regime.alpha * tau);
                yo = damp * (ch * yv - sh_over_u * xv);
                break;
            }
            case Regime::Oscillatory: {
                const double co = std::cos(regime.beta * tau);
                const double si = std::sin(regime.beta * tau);
                xo = damp * (co * xv + regime.w * si * yv);
                const double si_over_w = regime.w > 1e-6
                    ? si / regime.w
                    : (regime.gbar + regime.lbar) * tau *
                          (regime.beta * tau < 1e-5 ? 1.0 : si / (regime.beta * tau));
                yo = damp * (co * yv - si_over_w * xv);
                break;
            }
            case Regime::ExceptionalPoint: {
                xo = damp * xv;
                yo = damp * (yv - (regime.gbar + regime.lbar) * tau * xv);
                break;
            }
        }
    };
    pair(kXa, kYb, x(kXa), x(kYb));
    pair(kXb, kYa, x(kXb), x(kYa));
    return x;
}

SteadyStateReport moments_from_covariance(const Mat4& sigma) {
    SteadyStateReport rep{};
    rep.var_xa = sigma(kXa, kXa);
    rep.var_ya = sigma(kYa, kYa);
    rep.var_xb = sigma(kXb, kXb);
    rep.var_yb = sigma(kYb, kYb);
    rep.xy_a = sigma(kXa, kYa);
    rep.xy_b = sigma(kXb, kYb);
    rep.pop_a = 0.5 * (rep.var_xa + rep.var_ya - 1.0);
    rep.pop_b = 0.5 * (rep.var_xb + rep.var_yb - 1.0);
    rep.corr_aa = {0.5 * (rep.var_xa - rep.var_ya), rep.xy_a};
    rep.corr_bb = {0.5 * (rep.var_xb - rep.var_yb), rep.xy_b};
    const double xx = sigma(kXa, kXb), yy = sigma(kYa, kYb);
    const double xy = sigma(kXa, kYb), yx = sigma(kYa, kXb);
    rep.corr_adag_b = {0.5 * (xx + yy), 0.5 * (xy - yx)};
    rep.corr_ab = {0.5 * (xx - yy), 0.5 * (xy + yx)};

    rep.degrees_defined = rep.pop_a > 1e-12 && rep.pop_b > 1e-12;
    if (rep.degrees_defined) {
        rep.eta_aa = (std::abs(rep.corr_aa) - rep.pop_a) / rep.pop_a;
        rep.eta_bb = (std::abs(rep.corr_bb) - rep.pop_b) / rep.pop_b;
        const double denom = std::sqrt(rep.pop_a * rep.pop_b);
        rep.gamma_ab = std::abs(rep.corr_adag_b) / denom;
        rep.eta_ab = std::abs(rep.corr_ab) / denom;
    } else {
        rep.eta_aa = rep.eta_bb = rep.gamma_ab = rep.eta_ab =
            std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

SteadyStateReport report_from_covariance(const Mat4& sigma) {
    SteadyStateReport rep = moments_from_covariance(sigma);
    if (!rep.degrees_defined) {
        throw degenerate_population_error(
            "report_from_covariance: degrees undefined, pop_a * pop_b vanishes");
    }
    return rep;
}

double symplectic_min_eigenvalue(const Mat4& sigma) {
    Eigen::Matrix4cd h = sigma.cast<std::complex<double>>();
    const std::complex<double> ih(0.0, 0.5);
    // Omega = diag(J, J), J = [[0, 1], [-1, 0]].
    h(0, 1) += ih;
    h(1, 0) -= ih;
    h(2, 3) += ih;
    h(3, 2) -= ih;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    return es.eigenvalues().minCoeff();
}

}  // namespace duomode
