#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

// Scalar reference implementations of the math primitives used inside the
// Langevin kernels. The AVX2 kernels re-implement exactly these operation
// sequences with intrinsics; since every step is a correctly rounded IEEE
// operation (+, -, *, /, sqrt) or an exact bit manipulation, the two paths
// agree bit-for-bit. libm is deliberately not used here: its vector math
// would not match the scalar calls.

namespace duomode::simd::detail {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kTwoOverPi = 0.63661977236758134308;
inline constexpr double kPio2Hi = 1.57079632679489655800e+00;
inline constexpr double kPio2Lo = 6.12323399573676603587e-17;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.41421356237309514547;
inline constexpr double kUlp53 = 1.1102230246251565404e-16;  // 2^-53

// atanh-series coefficients: ln f = 2s + s w (c0 + c1 w + ... + c8 w^8),
// s = (f-1)/(f+1), w = s^2, valid for f in (sqrt2/2, sqrt2].
inline constexpr double kLogC[9] = {
    2.0 / 3.0,  2.0 / 5.0,  2.0 / 7.0,  2.0 / 9.0,  2.0 / 11.0,
    2.0 / 13.0, 2.0 / 15.0, 2.0 / 17.0, 2.0 / 19.0,
};

// fdlibm kernel coefficients for sin/cos on [-pi/4, pi/4].
inline constexpr double kSinC[6] = {
    -1.66666666666666324348e-01, 8.33333333332248946124e-03,
    -1.98412698298579493134e-04, 2.75573137070700676789e-06,
    -2.50507602534068634195e-08, 1.58969099521155010221e-10,
};
inline constexpr double kCosC[6] = {
    4.16666666666666019037e-02,  -1.38888888888741095749e-03,
    2.48015872894767294178e-05,  -2.75573143513906633035e-07,
    2.08757232129817482790e-09,  -1.13596475577881948265e-11,
};

// Mantissa of a raw u64 draw mapped to [1, 2); subtracting 1 gives an exact
// 52-bit uniform in [0, 1).
inline double unit_from_u64(std::uint64_t z) {
    const std::uint64_t bits = (z >> 12) | 0x3FF0000000000000ull;
    return std::bit_cast<double>(bits) - 1.0;
}

// ln(x) for x in (0, 1); |error| a few ulp.
inline double log_unit(double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    double e = static_cast<double>(static_cast<std::int64_t>(bits >> 52)) - 1023.0;
    double f = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    if (f > kSqrt2) {
        f = 0.5 * f;
        e = e + 1.0;
    }
    const double s = (f - 1.0) / (f + 1.0);
    const double w = s * s;
    double p = kLogC[8];
    for (int i = 7; i >= 0; --i) p = p * w + kLogC[i];
    const double r = 2.0 * s + (s * w) * p;
    return e * kLn2Hi + (r + e * kLn2Lo);
}

// sin/cos for theta in [0, 2*pi).
inline void sincos_unit(double theta, double& sn, double& cs) {
    const double k = std::nearbyint(theta * kTwoOverPi);  // 0..4
    const double r = (theta - k * kPio2Hi) - k * kPio2Lo;
    const double q = k > 3.5 ? k - 4.0 : k;  // quadrant 0..3

    const double z = r * r;
    double ps = kSinC[5];
    for (int i = 4; i >= 0; --i) ps = ps * z + kSinC[i];
    const double ss = r + (r * z) * ps;
    double pc = kCosC[5];
    for (int i = 4; i >= 0; --i) pc = pc * z + kCosC[i];
    const double cc = (1.0 - 0.5 * z) + (z * z) * pc;

    if (q == 0.0) {
        sn = ss;
        cs = cc;
    } else if (q == 1.0) {
        sn = cc;
        cs = -ss;
    } else if (q == 2.0) {
        sn = -ss;
        cs = -cc;
    } else {
        sn = -cc;
        cs = ss;
    }
}

// Box-Muller pair from two raw u64 draws.
inline void normal_pair(std::uint64_t za, std::uint64_t zb, double& n0, double& n1) {
    const double u_log = unit_from_u64(za) + kUlp53;  // (0, 1)
    const double u_ang = unit_from_u64(zb);           // [0, 1)
    const double r = std::sqrt(-2.0 * log_unit(u_log));
    const double theta = kTwoPi * u_ang;
    double sn, cs;
    sincos_unit(theta, sn, cs);
    n0 = r * cs;
    n1 = r * sn;
}

}  // namespace duomode::simd::detail
