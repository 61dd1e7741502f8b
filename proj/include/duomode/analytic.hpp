#pragma once

#include <array>
#include <complex>
#include <utility>

#include "duomode/model.hpp"

namespace duomode {

using Complex = std::complex<double>;

/// All steady-state observables of one parameter point, in dimensionless
/// (kappa-normalized) form. Populations follow from the variances via
/// pop_i = (var_xi + var_yi - 1)/2; the two-photon correlators satisfy
/// corr_ii = (var_xi - var_yi)/2 + i xy_i with the symmetrized xy moments.
/// Degrees are left NaN (degrees_defined = false) when pop_a * pop_b
/// vanishes, where they are undefined.
struct SteadyStateReport {
    double var_xa, var_ya, var_xb, var_yb;
    double xy_a, xy_b;  // symmetrized <X_i Y_i>, commutator i/2 stripped
    double pop_a, pop_b;
    Complex corr_aa, corr_bb;  // <aa>, <bb>
    Complex corr_ab;           // <ab>
    Complex corr_adag_b;       // <a^dag b>
    bool degrees_defined;
    double eta_aa, eta_bb;  // (|<ii>| - <i^dag i>) / <i^dag i>
    double gamma_ab;        // |<a^dag b>| / sqrt(pop_a pop_b)
    double eta_ab;          // |<ab>| / sqrt(pop_a pop_b)
};

/// Sums and differences of the cross-mode quadrature correlators.
struct CrossQuadratureSums {
    double xx_plus_yy;   // <X_a X_b> + <Y_a Y_b>
    double xx_minus_yy;  // <X_a X_b> - <Y_a Y_b>
    double xy_plus_yx;   // <X_a Y_b> + <Y_a X_b>
    double xy_minus_yx;  // <X_a Y_b> - <Y_a X_b>
};

struct SqueezeDegrees {
    double eta_aa, eta_bb, gamma_ab, eta_ab;
};

// Every function below requires stability(params); they throw
// instability_error otherwise.

/// (var_xa, var_ya, var_xb, var_yb). Exponential-branch expressions are used
/// for gbar >= lbar, oscillatory ones for lbar > gbar; the two branches are
/// the same rational function of the parameters and agree at the exceptional
/// point.
std::array<double, 4> steady_variances(const SystemParams& params, const ReservoirSpec& res);

/// (pop_a, pop_b) = n + [(1/2+n) g^2 + g lambda m {cos 2phi, 1}] S.
std::pair<double, double> steady_populations(const SystemParams& params, const ReservoirSpec& res);

/// Symmetrized same-mode cross moments (xy_a, xy_b).
std::pair<double, double> same_mode_xy(const SystemParams& params, const ReservoirSpec& res);

/// Complex single-mode two-photon correlators (<aa>, <bb>).
std::pair<Complex, Complex> same_mode_two_photon(const SystemParams& params,
                                                 const ReservoirSpec& res);

CrossQuadratureSums cross_quadrature_correlators(const SystemParams& params,
                                                 const ReservoirSpec& res);

/// (<a^dag b>, <ab>). In both regimes
///   <a^dag b> = -m g sin(phi) e^{i phi} S,
///   <ab>      = -i [(1/2+n) g + m lambda cos(phi) e^{i phi}] S,
/// the unique forms consistent with the cross-quadrature correlators.
std::pair<Complex, Complex> cross_mode_correlators(const SystemParams& params,
                                                   const ReservoirSpec& res);

/// Squeezing and coherence degrees; throws degenerate_population_error when
/// pop_a * pop_b vanishes.
SqueezeDegrees degrees(const SystemParams& params, const ReservoirSpec& res);

/// Assembles the full report. Total in the stable domain: at degenerate
/// populations the degree fields are NaN and degrees_defined is false.
SteadyStateReport steady_state_report(const SystemParams& params, const ReservoirSpec& res);

/// The 4x4 symmetrized covariance implied by the closed forms, in the global
/// quadrature ordering.
Mat4 covariance_from_report(const SteadyStateReport& rep);

}  // namespace duomode
