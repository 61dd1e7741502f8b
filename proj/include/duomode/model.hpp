#pragma once

#include <Eigen/Dense>
#include <complex>

#include "duomode/errors.hpp"

namespace duomode {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

// Quadrature ordering used everywhere: (X_a, Y_a, X_b, Y_b).
enum Quadrature { kXa = 0, kYa = 1, kXb = 2, kYb = 3 };

/// System parameters of the doubly coupled mode pair: both modes damp at the
/// same rate kappa, couple through a linear (lambda, photon-exchange) and a
/// nonlinear (g, two-mode-squeezing) interaction, and the mode-b
/// reservoir/quadrature frame is rotated by phi.
class SystemParams {
  public:
    SystemParams(double kappa, double g, double lambda, double phi);

    double kappa() const { return kappa_; }
    double g() const { return g_; }
    double lambda() const { return lambda_; }
    double phi() const { return phi_; }      // reduced to [0, 2*pi)
    double gbar() const { return gbar_; }    // g / kappa
    double lbar() const { return lbar_; }    // lambda / kappa

  private:
    double kappa_, g_, lambda_, phi_;
    double gbar_, lbar_;
};

/// Local reservoir shared by both modes: mean thermal photon number n and
/// two-photon correlation magnitude m, physical when m <= sqrt(n(n+1)).
class ReservoirSpec {
  public:
    ReservoirSpec(double n, double m);

    static ReservoirSpec thermal(double n) { return {n, 0.0}; }
    static ReservoirSpec classical_max(double n) { return {n, n}; }
    static ReservoirSpec quantum_max(double n) { return {n, std::sqrt(n * (n + 1.0))}; }

    double n() const { return n_; }
    double m() const { return m_; }
    bool is_thermal() const { return m_ == 0.0; }
    bool is_classical() const { return m_ <= n_; }

  private:
    double n_, m_;
};

/// The two-photon-correlation slices studied throughout: thermal (m = 0),
/// maximally classically squeezed (m = n), maximally quantum squeezed
/// (m = sqrt(n(n+1))), or a literal m value.
enum class MMode { Thermal, ClassicalMax, QuantumMax, Literal };

ReservoirSpec make_reservoir(double n, MMode mode, double literal_m = 0.0);

enum class Regime { Exponential, Oscillatory, ExceptionalPoint };

/// Characteristic-root data for one parameter point. Roots are in units of
/// kappa. alpha/psi/u are populated in the exponential regime, beta/chi/w in
/// the oscillatory one; the unused branch quantities are NaN. At the
/// exceptional point both auxiliary sets are zero and the roots coalesce at
/// -kappa.
struct RegimeInfo {
    Regime regime;
    std::complex<double> p1, p2;  // roots of p^2 + 2p + (1 + lbar^2 - gbar^2)
    double alpha;                 // sqrt(gbar^2 - lbar^2), exponential branch
    double beta;                  // sqrt(lbar^2 - gbar^2), oscillatory branch
    double psi;                   // arctanh(alpha), NaN when alpha >= 1
    double chi;                   // arctan(beta)
    double u;                     // sqrt((gbar - lbar)/(gbar + lbar))
    double w;                     // sqrt((lbar - gbar)/(lbar + gbar))
    double kappa;                 // raw damping rate, for dimensionful use
    double gbar, lbar;
};

constexpr double kRegimeTolerance = 1e-9;

/// Classifies the dynamical regime by the sign of gbar^2 - lbar^2;
/// |gbar - lbar| <= tol * max(gbar, lbar, 1) counts as the exceptional point.
RegimeInfo classify_regime(const SystemParams& params, double tol = kRegimeTolerance);

/// Drift matrix of the quadrature equations of motion: diagonal -kappa, X rows
/// couple to the opposite mode's Y with -(g - lambda), Y rows to the opposite
/// mode's X with -(g + lambda).
Mat4 drift_matrix(const SystemParams& params);

/// Diffusion matrix D = 2 kappa N with N the symmetrized input-noise
/// covariance; the mode-b block carries the phase-rotated squeezing terms
/// m cos(2 phi) and the cross term m sin(2 phi).
Mat4 diffusion_matrix(const SystemParams& params, const ReservoirSpec& res);

/// True iff all characteristic roots have negative real part, i.e.
/// kappa^2 + lambda^2 - g^2 > 0.
bool stability(const SystemParams& params);

/// kappa^2 + lambda^2 - g^2 (raw units); positive in the stable domain.
double stability_gap(const SystemParams& params);

/// S = kappa^2 / (kappa^2 + lambda^2 - g^2), the single rational factor that
/// equals cosh^2(psi) in the exponential regime and cos^2(chi) in the
/// oscillatory one. Throws instability_error outside the stable domain.
double s_factor(const SystemParams& params);

}  // namespace duomode
