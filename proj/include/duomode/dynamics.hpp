#pragma once

#include "duomode/analytic.hpp"
#include "duomode/model.hpp"

namespace duomode {

/// Unique solution Sigma of A Sigma + Sigma A^T + D = 0 via the dense linear
/// system over the 10 independent entries of the symmetric unknown.
/// Throws instability_error when A is not strictly stable and
/// singular_system_error when the system is numerically rank-deficient.
Mat4 steady_state_lyapunov(const Mat4& a, const Mat4& d);

/// Integrates dSigma/dt = A Sigma + Sigma A^T + D with classic fixed-step RK4,
/// re-symmetrizing after every step. Throws step_size_error when
/// dt > 0.1 / ||A||_inf.
Mat4 evolve_covariance(const Mat4& a, const Mat4& d, const Mat4& sigma0, double t, double dt);

/// exp(A t) x0 evaluated through the regime's homogeneous propagator: the
/// cosh/sinh combination with factor u in the exponential regime, the cos/sin
/// combination with factor w in the oscillatory one, and the degenerate
/// limit at the exceptional point (X decoupled from Y, Y driven by X with
/// weight -(g + lambda) t).
Vec4 propagate_mean(const RegimeInfo& regime, const Vec4& x0, double t);

/// Report assembled from a covariance matrix (populations from the variances,
/// correlators from the symmetrized moments). Throws
/// degenerate_population_error when the degrees are undefined.
SteadyStateReport report_from_covariance(const Mat4& sigma);

/// As report_from_covariance but total: degree fields are NaN with
/// degrees_defined = false at degenerate populations.
SteadyStateReport moments_from_covariance(const Mat4& sigma);

/// Minimum eigenvalue of Sigma + (i/2) Omega with Omega the symplectic form
/// for the (X_a, Y_a, X_b, Y_b) ordering; >= 0 up to rounding for physical
/// states.
double symplectic_min_eigenvalue(const Mat4& sigma);

}  // namespace duomode
