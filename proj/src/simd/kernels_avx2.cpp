// AVX2 variant of the Langevin kernels: one trajectory per 64-bit lane,
// mirroring the operation sequence of kernels_scalar.cpp / math_scalar.hpp
// step for step so results are bit-identical to the scalar reference.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>

#include "duomode/simd/kernels.hpp"
#include "duomode/simd/math_scalar.hpp"
#include "duomode/simd/rng.hpp"

namespace duomode::simd {

namespace {

using namespace detail;

inline __m256i mul64(__m256i a, std::uint64_t b) {
    // Low 64 bits of a 64x64 product from 32x32 partials.
    const __m256i bv = _mm256_set1_epi64x(static_cast<long long>(b));
    const __m256i bhi = _mm256_set1_epi64x(static_cast<long long>(b >> 32));
    const __m256i lo = _mm256_mul_epu32(a, bv);
    const __m256i ahi = _mm256_srli_epi64(a, 32);
    const __m256i cross =
        _mm256_add_epi64(_mm256_mul_epu32(ahi, bv), _mm256_mul_epu32(a, bhi));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_v(__m256i z) {
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
    z = mul64(z, 0xBF58476D1CE4E5B9ull);
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
    z = mul64(z, 0x94D049BB133111EBull);
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
    return z;
}

inline __m256i draw_v(__m256i streams, std::uint64_t counter) {
    const std::uint64_t inc = (counter + 1) * kGamma;
    return mix64_v(_mm256_add_epi64(streams, _mm256_set1_epi64x(static_cast<long long>(inc))));
}

inline __m256d unit_from_u64_v(__m256i z) {
    const __m256i mant = _mm256_or_si256(_mm256_srli_epi64(z, 12),
                                         _mm256_set1_epi64x(0x3FF0000000000000ll));
    return _mm256_sub_pd(_mm256_castsi256_pd(mant), _mm256_set1_pd(1.0));
}

inline __m256d log_unit_v(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    // Exponent as a double via the 2^52 offset trick (values 0..2046).
    const __m256i ebits = _mm256_or_si256(_mm256_srli_epi64(bits, 52),
                                          _mm256_set1_epi64x(0x4330000000000000ll));
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(ebits),
                              _mm256_add_pd(_mm256_set1_pd(4503599627370496.0),
                                            _mm256_set1_pd(1023.0)));
    __m256d f = _mm256_castsi256_pd(_mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
        _mm256_set1_epi64x(0x3FF0000000000000ll)));
    const __m256d big = _mm256_cmp_pd(f, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
    f = _mm256_blendv_pd(f, _mm256_mul_pd(_mm256_set1_pd(0.5), f), big);
    e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(f, one), _mm256_add_pd(f, one));
    const __m256d w = _mm256_mul_pd(s, s);
    __m256d p = _mm256_set1_pd(kLogC[8]);
    for (int i = 7; i >= 0; --i) {
        p = _mm256_add_pd(_mm256_mul_pd(p, w), _mm256_set1_pd(kLogC[i]));
    }
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s),
                                    _mm256_mul_pd(_mm256_mul_pd(s, w), p));
    return _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)),
                         _mm256_add_pd(r, _mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo))));
}

inline void sincos_v(__m256d theta, __m256d& sn, __m256d& cs) {
    const __m256d k = _mm256_round_pd(_mm256_mul_pd(theta, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d r = _mm256_sub_pd(
        _mm256_sub_pd(theta, _mm256_mul_pd(k, _mm256_set1_pd(kPio2Hi))),
        _mm256_mul_pd(k, _mm256_set1_pd(kPio2Lo)));
    const __m256d qm = _mm256_cmp_pd(k, _mm256_set1_pd(3.5), _CMP_GT_OQ);
    const __m256d q = _mm256_sub_pd(k, _mm256_and_pd(qm, _mm256_set1_pd(4.0)));

    const __m256d z = _mm256_mul_pd(r, r);
    __m256d ps = _mm256_set1_pd(kSinC[5]);
    for (int i = 4; i >= 0; --i) {
        ps = _mm256_add_pd(_mm256_mul_pd(ps, z), _mm256_set1_pd(kSinC[i]));
    }
    const __m256d ss = _mm256_add_pd(r, _mm256_mul_pd(_mm256_mul_pd(r, z), ps));
    __m256d pc = _mm256_set1_pd(kCosC[5]);
    for (int i = 4; i >= 0; --i) {
        pc = _mm256_add_pd(_mm256_mul_pd(pc, z), _mm256_set1_pd(kCosC[i]));
    }
    const __m256d cc = _mm256_add_pd(
        _mm256_sub_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(_mm256_set1_pd(0.5), z)),
        _mm256_mul_pd(_mm256_mul_pd(z, z), pc));

    const __m256d m1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    const __m256d m2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    const __m256d m3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    const __m256d swap = _mm256_or_pd(m1, m3);
    const __m256d sign = _mm256_set1_pd(-0.0);
    sn = _mm256_xor_pd(_mm256_blendv_pd(ss, cc, swap),
                       _mm256_and_pd(sign, _mm256_or_pd(m2, m3)));
    cs = _mm256_xor_pd(_mm256_blendv_pd(cc, ss, swap),
                       _mm256_and_pd(sign, _mm256_or_pd(m1, m2)));
}

inline void normal_pair_v(__m256i za, __m256i zb, __m256d& n0, __m256d& n1) {
    const __m256d u_log = _mm256_add_pd(unit_from_u64_v(za), _mm256_set1_pd(kUlp53));
    const __m256d u_ang = unit_from_u64_v(zb);
    const __m256d r = _mm256_sqrt_pd(
        _mm256_mul_pd(_mm256_set1_pd(-2.0), log_unit_v(u_log)));
    const __m256d theta = _mm256_mul_pd(_mm256_set1_pd(kTwoPi), u_ang);
    __m256d sn, cs;
    sincos_v(theta, sn, cs);
    n0 = _mm256_mul_pd(r, cs);
    n1 = _mm256_mul_pd(r, sn);
}

void gaussian4_avx2(const std::uint64_t* streams, std::uint64_t counter0, double* xi) {
    const __m256i sv =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(streams));
    __m256d n0, n1, n2, n3;
    normal_pair_v(draw_v(sv, counter0), draw_v(sv, counter0 + 1), n0, n1);
    normal_pair_v(draw_v(sv, counter0 + 2), draw_v(sv, counter0 + 3), n2, n3);
    _mm256_storeu_pd(xi + 0 * kLanes, n0);
    _mm256_storeu_pd(xi + 1 * kLanes, n1);
    _mm256_storeu_pd(xi + 2 * kLanes, n2);
    _mm256_storeu_pd(xi + 3 * kLanes, n3);
}

void vlog_avx2(const double* x, double* out) {
    _mm256_storeu_pd(out, log_unit_v(_mm256_loadu_pd(x)));
}

void vsincos_avx2(const double* x, double* s, double* c) {
    __m256d sn, cs;
    sincos_v(_mm256_loadu_pd(x), sn, cs);
    _mm256_storeu_pd(s, sn);
    _mm256_storeu_pd(c, cs);
}

void run_segment_avx2(const SegmentArgs& args) {
    const __m256i sv =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(args.streams));
    const __m256d dtv = _mm256_set1_pd(args.dt);
    __m256d x[4], am;
    for (int i = 0; i < 4; ++i) x[i] = _mm256_loadu_pd(args.state + i * kLanes);
    am = _mm256_loadu_pd(args.absmax);
    __m256d av[16], lv[16];
    for (int i = 0; i < 16; ++i) {
        av[i] = _mm256_set1_pd(args.drift[i]);
        lv[i] = _mm256_set1_pd(args.noise[i]);
    }
    const __m256d signmask = _mm256_set1_pd(-0.0);

    for (std::size_t step = 0; step < args.n_steps; ++step) {
        const std::uint64_t c0 = args.counter0 + 4 * step;
        __m256d e[4];
        normal_pair_v(draw_v(sv, c0), draw_v(sv, c0 + 1), e[0], e[1]);
        normal_pair_v(draw_v(sv, c0 + 2), draw_v(sv, c0 + 3), e[2], e[3]);

        __m256d xn[4];
        for (int i = 0; i < 4; ++i) {
            __m256d acc = _mm256_mul_pd(av[4 * i + 0], x[0]);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(av[4 * i + 1], x[1]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(av[4 * i + 2], x[2]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(av[4 * i + 3], x[3]));
            __m256d ns = _mm256_mul_pd(lv[4 * i + 0], e[0]);
            ns = _mm256_add_pd(ns, _mm256_mul_pd(lv[4 * i + 1], e[1]));
            ns = _mm256_add_pd(ns, _mm256_mul_pd(lv[4 * i + 2], e[2]));
            ns = _mm256_add_pd(ns, _mm256_mul_pd(lv[4 * i + 3], e[3]));
            const __m256d v = _mm256_add_pd(x[i], _mm256_mul_pd(dtv, acc));
            xn[i] = _mm256_add_pd(v, ns);
        }
        for (int i = 0; i < 4; ++i) {
            x[i] = xn[i];
            am = _mm256_max_pd(_mm256_andnot_pd(signmask, xn[i]), am);
        }
        if (args.acc != nullptr) {
            int k = 0;
            for (int i = 0; i < 4; ++i) {
                for (int j = i; j < 4; ++j, ++k) {
                    const __m256d cur = _mm256_loadu_pd(args.acc + k * kLanes);
                    _mm256_storeu_pd(
                        args.acc + k * kLanes,
                        _mm256_add_pd(cur, _mm256_mul_pd(xn[i], xn[j])));
                }
            }
        }
    }
    for (int i = 0; i < 4; ++i) _mm256_storeu_pd(args.state + i * kLanes, x[i]);
    _mm256_storeu_pd(args.absmax, am);
}

}  // namespace

const KernelSet* avx2_kernels_impl() {
    static const KernelSet set{
        "avx2",
        run_segment_avx2,
        gaussian4_avx2,
        vlog_avx2,
        vsincos_avx2,
    };
    return &set;
}

}  // namespace duomode::simd

#endif  // x86_64
