#include "duomode/analytic.hpp"

#include <cmath>

namespace duomode {

namespace {

constexpr double kPopEps = 1e-12;
const Complex kImag{0.0, 1.0};

// Precomputed normalized quantities shared by all closed forms.
struct Ctx {
    double g, l;     // gbar, lbar
    double n, m;
    double t;        // 1/2 + n
    double phi;
    double c2, s2;   // cos 2phi, sin 2phi
    double s;        // S = 1 / (1 + lbar^2 - gbar^2)
    bool exponential_branch;  // gbar >= lbar
};

Ctx make_ctx(const SystemParams& p, const ReservoirSpec& r) {
    Ctx c{};
    c.g = p.gbar();
    c.l = p.lbar();
    c.n = r.n();
    c.m = r.m();
    c.t = 0.5 + r.n();
    c.phi = p.phi();
    c.c2 = std::cos(2.0 * p.phi());
    c.s2 = std::sin(2.0 * p.phi());
    c.s = s_factor(p);  // throws instability_error when unstable
    c.exponential_branch = c.g >= c.l;
    return c;
}

double sinh2_psi(const Ctx& c) { return (c.g * c.g - c.l * c.l) * c.s; }
double sin2_chi(const Ctx& c) { return (c.l * c.l - c.g * c.g) * c.s; }

std::array<double, 4> variances(const Ctx& c) {
    if (c.exponential_branch) {
        const double sh2 = sinh2_psi(c);
        const double amp = 1.0 + 0.5 * sh2;
        const double gm2 = (c.g - c.l) * (c.g - c.l);
        const double gp2 = (c.g + c.l) * (c.g + c.l);
        return {
            (c.t + c.m) * amp + 0.5 * gm2 * (c.t - c.m * c.c2) * c.s,
            (c.t - c.m) * amp + 0.5 * gp2 * (c.t + c.m * c.c2) * c.s,
            (c.t + c.m * c.c2) * amp + 0.5 * gm2 * (c.t - c.m) * c.s,
            (c.t - c.m * c.c2) * amp + 0.5 * gp2 * (c.t + c.m) * c.s,
        };
    }
    const double sn2 = sin2_chi(c);
    const double cp2 = std::cos(c.phi) * std::cos(c.phi);
    const double dn = c.g * (c.l - c.g);
    const double up = c.g * (c.l + c.g);
    return {
        (c.t + c.m - c.m * cp2 * sn2) - (c.t - c.m * c.c2) * dn * c.s,
        (c.t - c.m + c.m * cp2 * sn2) + (c.t + c.m * c.c2) * up * c.s,
        (c.t + c.m * c.c2 - c.m * cp2 * sn2) - (c.t - c.m) * dn * c.s,
        (c.t - c.m * c.c2 + c.m * cp2 * sn2) + (c.t + c.m) * up * c.s,
    };
}

std::pair<Complex, Complex> two_photon(const Ctx& c) {
    const Complex eip = std::polar(1.0, c.phi);
    const double sp = std::sin(c.phi);
    const double cp = std::cos(c.phi);
    if (c.exponential_branch) {
        // e^{-i(phi+pi/2)} and e^{i(phi-pi/2)} written out explicitly.
        const Complex ph_aa = std::polar(1.0, -(c.phi + 0.5 * M_PI));
        const Complex ph_bb = std::polar(1.0, c.phi - 0.5 * M_PI);
        const Complex aa =
            c.m - (c.t * c.g * c.l + c.m * sp * ph_aa * (c.g * c.g) +
                   c.m * cp * eip * (c.l * c.l)) * c.s;
        const Complex bb =
            c.m * std::polar(1.0, 2.0 * c.phi) -
            (c.t * c.g * c.l + c.m * sp * ph_bb * (c.g * c.g) +
             c.m * cp * eip * (c.l * c.l)) * c.s;
        return {aa, bb};
    }
    const double sn2 = sin2_chi(c);
    const Complex aa = c.m - c.m * cp * eip * sn2 -
                       (c.t * c.g * c.l + c.m * c.g * c.g * c.c2) * c.s;
    const Complex bb = c.m * std::polar(1.0, 2.0 * c.phi) - c.m * cp * eip * sn2 -
                       (c.t * c.g * c.l + c.m * c.g * c.g) * c.s;
    return {aa, bb};
}

std::pair<double, double> populations(const Ctx& c) {
    return {c.n + (c.t * c.g * c.g + c.g * c.l * c.m * c.c2) * c.s,
            c.n + (c.t * c.g * c.g + c.g * c.l * c.m) * c.s};
}

std::pair<Complex, Complex> cross_correlators(const Ctx& c) {
    const Complex eip = std::polar(1.0, c.phi);
    const Complex adag_b = -c.m * c.g * std::sin(c.phi) * eip * c.s;
    const Complex ab = -kImag * (c.t * c.g + c.m * c.l * std::cos(c.phi) * eip) * c.s;
    return {adag_b, ab};
}

}  // namespace

std::array<double, 4> steady_variances(const SystemParams& params, const ReservoirSpec& res) {
    return variances(make_ctx(params, res));
}

std::pair<double, double> steady_populations(const SystemParams& params,
                                             const ReservoirSpec& res) {
    return populations(make_ctx(params, res));
}

std::pair<double, double> same_mode_xy(const SystemParams& params, const ReservoirSpec& res) {
    const Ctx c = make_ctx(params, res);
    if (c.exponential_branch) {
        const double sh2 = sinh2_psi(c);
        return {0.5 * c.m * c.s2 * sh2, c.m * c.s2 * (1.0 + 0.5 * sh2)};
    }
    // Not printed in closed form for this branch; recovered as Im<ii>.
    const auto [aa, bb] = two_photon(c);
    return {aa.imag(), bb.imag()};
}

std::pair<Complex, Complex> same_mode_two_photon(const SystemParams& params,
                                                 const ReservoirSpec& res) {
    return two_photon(make_ctx(params, res));
}

CrossQuadratureSums cross_quadrature_correlators(const SystemParams& params,
                                                 const ReservoirSpec& res) {
    const Ctx c = make_ctx(params, res);
    const double cp2 = std::cos(c.phi) * std::cos(c.phi);
    const double sp2 = std::sin(c.phi) * std::sin(c.phi);
    return {
        -c.m * c.g * c.s2 * c.s,
        c.m * c.l * c.s2 * c.s,
        -2.0 * (c.t * c.g + c.m * c.l * cp2) * c.s,
        -2.0 * c.m * c.g * sp2 * c.s,
    };
}

std::pair<Complex, Complex> cross_mode_correlators(const SystemParams& params,
                                                   const ReservoirSpec& res) {
    return cross_correlators(make_ctx(params, res));
}

SqueezeDegrees degrees(const SystemParams& params, const ReservoirSpec& res) {
    const SteadyStateReport rep = steady_state_report(params, res);
    if (!rep.degrees_defined) {
        throw degenerate_population_error(
            "degrees undefined: pop_a * pop_b vanishes");
    }
    return {rep.eta_aa, rep.eta_bb, rep.gamma_ab, rep.eta_ab};
}

SteadyStateReport steady_state_report(const SystemParams& params, const ReservoirSpec& res) {
    const Ctx c = make_ctx(params, res);
    SteadyStateReport rep{};
    const auto v = variances(c);
    rep.var_xa = v[0];
    rep.var_ya = v[1];
    rep.var_xb = v[2];
    rep.var_yb = v[3];
    std::tie(rep.pop_a, rep.pop_b) = populations(c);
    std::tie(rep.corr_aa, rep.corr_bb) = two_photon(c);
    if (c.exponential_branch) {
        const double sh2 = sinh2_psi(c);
        rep.xy_a = 0.5 * c.m * c.s2 * sh2;
        rep.xy_b = c.m * c.s2 * (1.0 + 0.5 * sh2);
    } else {
        rep.xy_a = rep.corr_aa.imag();
        rep.xy_b = rep.corr_bb.imag();
    }
    std::tie(rep.corr_adag_b, rep.corr_ab) = cross_correlators(c);

    rep.degrees_defined = rep.pop_a > kPopEps && rep.pop_b > kPopEps;
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

Mat4 covariance_from_report(const SteadyStateReport& rep) {
    Mat4 sigma;
    // Invert the correlator assembly
    //   <a^dag b> = [(XX + YY) + i (XY - YX)] / 2
    //   <ab>      = [(XX - YY) + i (XY + YX)] / 2
    // for the four cross entries XX = <X_a X_b>, ..., YX = <Y_a X_b>.
    const double xx = rep.corr_adag_b.real() + rep.corr_ab.real();
    const double yy = rep.corr_adag_b.real() - rep.corr_ab.real();
    const double xy = rep.corr_ab.imag() + rep.corr_adag_b.imag();
    const double yx = rep.corr_ab.imag() - rep.corr_adag_b.imag();
    sigma << rep.var_xa, rep.xy_a, xx, xy,
             rep.xy_a, rep.var_ya, yx, yy,
             xx, yx, rep.var_xb, rep.xy_b,
             xy, yy, rep.xy_b, rep.var_yb;
    return sigma;
}

}  // namespace duomode
