#pragma once

#include <cstddef>
#include <cstdint>

#include "duomode/model.hpp"
#include "duomode/simd/kernels.hpp"

namespace duomode {

/// Euler-Maruyama ensemble configuration. Times are in raw units (1/kappa
/// when kappa = 1); burn_in is the fraction of each trajectory discarded
/// before moments are accumulated.
struct SdeConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    std::size_t n_traj = 20000;
    double burn_in = 0.5;
    std::uint64_t seed = 1;
};

/// Defaults honoring dt <= 0.05/||A|| and t_end >= 20/|slowest decay rate|
/// for the given parameter point.
SdeConfig recommended_sde_config(const SystemParams& params, std::uint64_t seed = 1);

/// Sample symmetrized second moments of the stationary state, their standard
/// errors (per-trajectory batch means), and split-half estimates for
/// stationarity diagnostics.
struct EnsembleEstimate {
    Mat4 sigma_hat;
    Mat4 std_error;
    std::size_t n_effective;
    Mat4 sigma_first_half;
    Mat4 sigma_second_half;
};

/// Factor L with L L^T = D dt (PSD-safe pivoted Cholesky; columns belonging
/// to zero pivots are zeroed). Throws factorization_error when D has an
/// eigenvalue below -1e-10.
Mat4 noise_transform(const Mat4& d, double dt);

/// Integrates n_traj independent trajectories of
///   x_{k+1} = x_k + A x_k dt + L xi_k
/// from x_0 = 0 and averages post-burn-in outer products over time and
/// ensemble. Deterministic for a fixed seed: trajectory j uses the RNG
/// substream seed XOR j (see simd/rng.hpp) and the cross-trajectory reduction
/// is a fixed pairwise tree, so results do not depend on thread count
/// (DUOMODE_THREADS caps parallelism). Throws instability_error for unstable
/// params, step_size_error when dt > 0.05/||A||, and divergence_error if any
/// |x| exceeds 1e6.
EnsembleEstimate run_ensemble(const SystemParams& params, const ReservoirSpec& res,
                              const SdeConfig& cfg);

/// As above with an explicit kernel set (scalar/AVX2 equivalence tests).
EnsembleEstimate run_ensemble(const SystemParams& params, const ReservoirSpec& res,
                              const SdeConfig& cfg, const simd::KernelSet& kernels);

/// Deterministic pairwise (cascade) summation; the reduction used for all
/// cross-trajectory averages.
double pairwise_sum(const double* v, std::size_t n);

/// Thread budget: DUOMODE_THREADS when set (>= 1), hardware concurrency
/// otherwise.
unsigned thread_budget();

}  // namespace duomode
