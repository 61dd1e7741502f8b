#include <cmath>
#include <cstdint>

#include "duomode/simd/kernels.hpp"
#include "duomode/simd/math_scalar.hpp"
#include "duomode/simd/rng.hpp"

namespace duomode::simd {

namespace {

using namespace detail;

void gaussian4_scalar(const std::uint64_t* streams, std::uint64_t counter0, double* xi) {
    for (int l = 0; l < kLanes; ++l) {
        normal_pair(draw_u64(streams[l], counter0), draw_u64(streams[l], counter0 + 1),
                    xi[0 * kLanes + l], xi[1 * kLanes + l]);
        normal_pair(draw_u64(streams[l], counter0 + 2), draw_u64(streams[l], counter0 + 3),
                    xi[2 * kLanes + l], xi[3 * kLanes + l]);
    }
}

void vlog_scalar(const double* x, double* out) {
    for (int l = 0; l < kLanes; ++l) out[l] = log_unit(x[l]);
}

void vsincos_scalar(const double* x, double* s, double* c) {
    for (int l = 0; l < kLanes; ++l) sincos_unit(x[l], s[l], c[l]);
}

void run_segment_scalar(const SegmentArgs& args) {
    const double* a = args.drift;
    const double* lm = args.noise;
    const double dt = args.dt;
    double xi[4 * kLanes];

    for (std::size_t step = 0; step < args.n_steps; ++step) {
        gaussian4_scalar(args.streams, args.counter0 + 4 * step, xi);
        for (int l = 0; l < kLanes; ++l) {
            const double x0 = args.state[0 * kLanes + l];
            const double x1 = args.state[1 * kLanes + l];
            const double x2 = args.state[2 * kLanes + l];
            const double x3 = args.state[3 * kLanes + l];
            const double e0 = xi[0 * kLanes + l];
            const double e1 = xi[1 * kLanes + l];
            const double e2 = xi[2 * kLanes + l];
            const double e3 = xi[3 * kLanes + l];
            double xn[4];
            for (int i = 0; i < 4; ++i) {
                double acc = a[4 * i + 0] * x0;
                acc = acc + a[4 * i + 1] * x1;
                acc = acc + a[4 * i + 2] * x2;
                acc = acc + a[4 * i + 3] * x3;
                double ns = lm[4 * i + 0] * e0;
                ns = ns + lm[4 * i + 1] * e1;
                ns = ns + lm[4 * i + 2] * e2;
                ns = ns + lm[4 * i + 3] * e3;
                double v = (i == 0 ? x0 : i == 1 ? x1 : i == 2 ? x2 : x3) + dt * acc;
                xn[i] = v + ns;
            }
            for (int i = 0; i < 4; ++i) {
                args.state[i * kLanes + l] = xn[i];
                const double av = std::fabs(xn[i]);
                if (av > args.absmax[l]) args.absmax[l] = av;
            }
            if (args.acc != nullptr) {
                double* acc = args.acc;
                int k = 0;
                for (int i = 0; i < 4; ++i) {
                    for (int j = i; j < 4; ++j, ++k) {
                        acc[k * kLanes + l] = acc[k * kLanes + l] + xn[i] * xn[j];
                    }
                }
            }
        }
    }
}

}  // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet set{
        "scalar",
        run_segment_scalar,
        gaussian4_scalar,
        vlog_scalar,
        vsincos_scalar,
    };
    return set;
}

}  // namespace duomode::simd
