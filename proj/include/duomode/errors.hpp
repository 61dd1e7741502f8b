#pragma once

#include <stdexcept>
#include <string>

namespace duomode {

// Thrown when kappa^2 + lambda^2 - g^2 <= 0 and a steady state is requested.
struct instability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a reservoir violates m <= sqrt(n(n+1)) or n < 0.
struct unphysical_reservoir_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when squeezing/coherence degrees are requested at zero population.
struct degenerate_population_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lyapunov linear system numerically rank-deficient.
struct singular_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration step too large for the requested dynamics.
struct step_size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A stochastic trajectory left the trust region (|x| > 1e6).
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Diffusion matrix not positive semidefinite within tolerance.
struct factorization_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace duomode
