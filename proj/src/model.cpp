#include "duomode/model.hpp"

#include <cmath>
#include <stdexcept>

namespace duomode {

namespace {

double reduce_phase(double phi) {
    constexpr double two_pi = 2.0 * M_PI;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
}

}  // namespace

SystemParams::SystemParams(double kappa, double g, double lambda, double phi)
    : kappa_(kappa), g_(g), lambda_(lambda), phi_(reduce_phase(phi)) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("SystemParams: kappa must be positive and finite");
    }
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw std::invalid_argument("SystemParams: g must be >= 0 and finite");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("SystemParams: lambda must be >= 0 and finite");
    }
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("SystemParams: phi must be finite");
    }
    gbar_ = g_ / kappa_;
    lbar_ = lambda_ / kappa_;
}

ReservoirSpec::ReservoirSpec(double n, double m) : n_(n), m_(m) {
    if (!(n >= 0.0) || !std::isfinite(n)) {
        throw unphysical_reservoir_error("ReservoirSpec: n must be >= 0 and finite");
    }
    if (!(m >= 0.0) || !std::isfinite(m)) {
        throw unphysical_reservoir_error("ReservoirSpec: m must be >= 0 and finite");
    }
    // Slack of a few ulps keeps m = sqrt(n(n+1)) computed elsewhere admissible.
    const double mmax = std::sqrt(n * (n + 1.0));
    if (m > mmax * (1.0 + 1e-12) + 1e-300) {
        throw unphysical_reservoir_error("ReservoirSpec: m > sqrt(n(n+1)) is unphysical");
    }
}

ReservoirSpec make_reservoir(double n, MMode mode, double literal_m) {
    switch (mode) {
        case MMode::Thermal: return ReservoirSpec::thermal(n);
        case MMode::ClassicalMax: return ReservoirSpec::classical_max(n);
        case MMode::QuantumMax: return ReservoirSpec::quantum_max(n);
        case MMode::Literal: break;
    }
    return {n, literal_m};
}

RegimeInfo classify_regime(const SystemParams& params, double tol) {
    const double g = params.gbar();
    const double l = params.lbar();
    RegimeInfo info{};
    info.kappa = params.kappa();
    info.gbar = g;
    info.lbar = l;
    info.alpha = info.beta = info.psi = info.chi = info.u = info.w =
        std::numeric_limits<double>::quiet_NaN();

    const double scale = std::max({g, l, 1.0});
    if (std::abs(g - l) <= tol * scale) {
        info.regime = Regime::ExceptionalPoint;
        info.p1 = info.p2 = {-1.0, 0.0};
        info.alpha = info.beta = 0.0;
        info.psi = info.chi = 0.0;
        info.u = info.w = 0.0;
    } else if (g > l) {
        info.regime = Regime::Exponential;
        info.alpha = std::sqrt(g * g - l * l);
        info.p1 = {-1.0 + info.alpha, 0.0};
        info.p2 = {-1.0 - info.alpha, 0.0};
        info.psi = info.alpha < 1.0 ? std::atanh(info.alpha)
                                    : std::numeric_limits<double>::quiet_NaN();
        info.u = std::sqrt((g - l) / (g + l));
    } else {
        info.regime = Regime::Oscillatory;
        info.beta = std::sqrt(l * l - g * g);
        info.p1 = {-1.0, info.beta};
        info.p2 = {-1.0, -info.beta};
        info.chi = std::atan(info.beta);
        info.w = std::sqrt((l - g) / (l + g));
    }
    return info;
}

Mat4 drift_matrix(const SystemParams& params) {
    const double k = params.kappa();
    const double gm = params.g() - params.lambda();
    const double gp = params.g() + params.lambda();
    Mat4 a = Mat4::Zero();
    a(kXa, kXa) = -k;
    a(kXa, kYb) = -gm;
    a(kYa, kYa) = -k;
    a(kYa, kXb) = -gp;
    a(kXb, kXb) = -k;
    a(kXb, kYa) = -gm;
    a(kYb, kYb) = -k;
    a(kYb, kXa) = -gp;
    return a;
}

Mat4 diffusion_matrix(const SystemParams& params, const ReservoirSpec& res) {
    const double t = 0.5 + res.n();
    const double m = res.m();
    const double c2 = std::cos(2.0 * params.phi());
    const double s2 = std::sin(2.0 * params.phi());
    Mat4 n = Mat4::Zero();
    n(kXa, kXa) = t + m;
    n(kYa, kYa) = t - m;
    n(kXb, kXb) = t + m * c2;
    n(kYb, kYb) = t - m * c2;
    n(kXb, kYb) = m * s2;
    n(kYb, kXb) = m * s2;
    return 2.0 * params.kappa() * n;
}

double stability_gap(const SystemParams& params) {
    const double k = params.kappa();
    return k * k + params.lambda() * params.lambda() - params.g() * params.g();
}

bool stability(const SystemParams& params) { return stability_gap(params) > 0.0; }

double s_factor(const SystemParams& params) {
    const double gap = stability_gap(params);
    if (gap <= 0.0) {
        throw instability_error("unstable: kappa^2+lambda^2-g^2 <= 0");
    }
    return params.kappa() * params.kappa() / gap;
}

}  // namespace duomode
