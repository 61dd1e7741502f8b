#pragma once

#include <cstddef>
#include <cstdint>

namespace duomode::simd {

// Number of trajectories advanced together by one kernel call. Fixed so the
// scalar reference and the AVX2 variant walk identical per-lane operation
// sequences and produce bit-identical results.
inline constexpr int kLanes = 4;

// One integration segment for kLanes independent trajectories:
//   x_{k+1} = x_k + dt * A x_k + L xi_k,    xi_k ~ N(0, I_4) per lane,
// with per-lane counter-based noise (see rng.hpp; 4 draws per step) and
// optional accumulation of the 10 second-moment products of the post-step
// state. All arrays are component-major: element [c * kLanes + lane].
struct SegmentArgs {
    const std::uint64_t* streams;  // [kLanes] per-trajectory RNG streams
    std::uint64_t counter0;        // RNG counter at segment start
    std::size_t n_steps;
    const double* drift;  // [16] row-major A
    const double* noise;  // [16] row-major L with L L^T = D dt
    double dt;
    double* state;   // [4 * kLanes] in/out
    double* acc;     // [10 * kLanes] moment accumulators, or nullptr
    double* absmax;  // [kLanes] running max |x| in/out
};

struct KernelSet {
    const char* name;
    void (*run_segment)(const SegmentArgs&);
    // Fills xi[4 * kLanes] with standard normals for one step (counters
    // counter0 .. counter0+3 per lane). Exposed for equivalence tests.
    void (*gaussian4)(const std::uint64_t* streams, std::uint64_t counter0, double* xi);
    // ln(x) for kLanes values in (0, 1); Box-Muller building block.
    void (*vlog)(const double* x, double* out);
    // sin/cos for kLanes angles in [0, 2*pi).
    void (*vsincos)(const double* x, double* s, double* c);
};

const KernelSet& scalar_kernels();

// AVX2 variant; nullptr when the build or the CPU does not support it.
const KernelSet* avx2_kernels();

// Runtime selection: AVX2 when available, scalar otherwise. The environment
// variable DUOMODE_SIMD=scalar|avx2 forces a path (unsupported requests fall
// back to scalar).
const KernelSet& active_kernels();

bool cpu_has_avx2();

}  // namespace duomode::simd
