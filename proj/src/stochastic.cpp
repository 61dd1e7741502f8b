#include "duomode/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "duomode/dynamics.hpp"
#include "duomode/simd/rng.hpp"

namespace duomode {

namespace {

constexpr double kDivergenceBound = 1e6;

struct Layout {
    std::size_t n_steps, burn_steps, half1, half2;
};

Layout make_layout(const SdeConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("SdeConfig: dt must be > 0");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("SdeConfig: t_end must be > 0");
    if (cfg.n_traj < 1) throw std::invalid_argument("SdeConfig: n_traj must be >= 1");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0)) {
        throw std::invalid_argument("SdeConfig: burn_in must be in [0, 1)");
    }
    Layout lay{};
    lay.n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    if (lay.n_steps < 2) throw std::invalid_argument("SdeConfig: fewer than 2 steps");
    lay.burn_steps = static_cast<std::size_t>(std::llround(cfg.burn_in * lay.n_steps));
    const std::size_t post = lay.n_steps - lay.burn_steps;
    if (post < 2) throw std::invalid_argument("SdeConfig: fewer than 2 post-burn-in samples");
    lay.half1 = post / 2;
    lay.half2 = post - lay.half1;
    return lay;
}

Mat4 symmetric_from_entries(const double* e) {
    Mat4 m;
    int k = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j, ++k) {
            m(i, j) = e[k];
            m(j, i) = e[k];
        }
    }
    return m;
}

}  // namespace

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

unsigned thread_budget() {
    if (const char* env = std::getenv("DUOMODE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

SdeConfig recommended_sde_config(const SystemParams& params, std::uint64_t seed) {
    SdeConfig cfg;
    cfg.seed = seed;
    const Mat4 a = drift_matrix(params);
    const double anorm = a.cwiseAbs().rowwise().sum().maxCoeff();
    cfg.dt = std::min(1e-3, 0.05 / anorm);
    const RegimeInfo info = classify_regime(params);
    // Slowest decay rate: kappa - alpha in the exponential regime, kappa
    // otherwise.
    double gap = params.kappa();
    if (info.regime == Regime::Exponential) {
        gap = params.kappa() * (1.0 - std::min(info.alpha, 1.0));
    }
    cfg.t_end = gap > 0.0 ? std::max(10.0 / params.kappa(), 20.0 / gap) : 10.0 / params.kappa();
    return cfg;
}

Mat4 noise_transform(const Mat4& d, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("noise_transform: dt must be > 0");
    // Factor D itself (the -1e-10 PSD bound is a statement about D), then
    // scale by sqrt(dt) so that L L^T = D dt.
    Mat4 m = 0.5 * (d + d.transpose().eval());
    const double scale = std::max(1.0, m.diagonal().maxCoeff());
    const double neg_tol = -1e-10 * scale;
    const double zero_tol = 1e-14 * scale;

    int perm[4] = {0, 1, 2, 3};
    Mat4 l = Mat4::Zero();  // factor of the permuted matrix
    for (int k = 0; k < 4; ++k) {
        int piv = k;
        for (int i = k + 1; i < 4; ++i) {
            if (m(perm[i], perm[i]) > m(perm[piv], perm[piv])) piv = i;
        }
        std::swap(perm[k], perm[piv]);
        l.row(k).swap(l.row(piv));
        const double dkk = m(perm[k], perm[k]);
        if (dkk < neg_tol) {
            throw factorization_error("noise_transform: diffusion matrix is not PSD");
        }
        if (dkk <= zero_tol) {
            continue;  // zero pivot: column stays zero
        }
        l(k, k) = std::sqrt(dkk);
        for (int i = k + 1; i < 4; ++i) {
            l(i, k) = m(perm[i], perm[k]) / l(k, k);
        }
        for (int i = k + 1; i < 4; ++i) {
            for (int j = k + 1; j < 4; ++j) {
                m(perm[i], perm[j]) -= l(i, k) * l(j, k);
            }
        }
    }
    // Undo the permutation and apply the sqrt(dt) step scaling so that
    // (result)(result)^T = D dt.
    Mat4 out = Mat4::Zero();
    for (int i = 0; i < 4; ++i) out.row(perm[i]) = std::sqrt(dt) * l.row(i);
    return out;
}

EnsembleEstimate run_ensemble(const SystemParams& params, const ReservoirSpec& res,
                              const SdeConfig& cfg) {
    return run_ensemble(params, res, cfg, simd::active_kernels());
}

EnsembleEstimate run_ensemble(const SystemParams& params, const ReservoirSpec& res,
                              const SdeConfig& cfg, const simd::KernelSet& kernels) {
    if (!stability(params)) {
        throw instability_error("run_ensemble: unstable parameters");
    }
    const Layout lay = make_layout(cfg);
    const Mat4 a = drift_matrix(params);
    const double anorm = a.cwiseAbs().rowwise().sum().maxCoeff();
    if (cfg.dt > 0.05 / anorm) {
        throw step_size_error("run_ensemble: dt exceeds 0.05/||A||");
    }
    const Mat4 l = noise_transform(diffusion_matrix(params, res), cfg.dt);

    double a_rm[16], l_rm[16];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a_rm[4 * i + j] = a(i, j);
            l_rm[4 * i + j] = l(i, j);
        }
    }

    const std::size_t n = cfg.n_traj;
    const std::size_t n_blocks = (n + simd::kLanes - 1) / simd::kLanes;
    const std::size_t post = lay.half1 + lay.half2;

    // Per-trajectory time averages, entry-major for contiguous reductions.
    std::vector<double> mom(10 * n), mh1(10 * n), mh2(10 * n);
    std::vector<std::int64_t> diverged_at(1, -1);

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(thread_budget(), n_blocks));
    std::vector<std::int64_t> worker_diverged(n_threads, -1);

    auto worker = [&](unsigned tid) {
        const std::size_t b0 = n_blocks * tid / n_threads;
        const std::size_t b1 = n_blocks * (tid + 1) / n_threads;
        alignas(32) std::uint64_t streams[simd::kLanes];
        alignas(32) double x[4 * simd::kLanes];
        alignas(32) double am[simd::kLanes];
        alignas(32) double acc1[10 * simd::kLanes];
        alignas(32) double acc2[10 * simd::kLanes];
        for (std::size_t b = b0; b < b1; ++b) {
            for (int lane = 0; lane < simd::kLanes; ++lane) {
                streams[lane] = simd::stream_for_trajectory(
                    cfg.seed, static_cast<std::uint64_t>(b) * simd::kLanes + lane);
            }
            std::fill(x, x + 4 * simd::kLanes, 0.0);
            std::fill(am, am + simd::kLanes, 0.0);
            std::fill(acc1, acc1 + 10 * simd::kLanes, 0.0);
            std::fill(acc2, acc2 + 10 * simd::kLanes, 0.0);

            simd::SegmentArgs sa{streams, 0, lay.burn_steps, a_rm, l_rm,
                                 cfg.dt, x, nullptr, am};
            kernels.run_segment(sa);
            sa.counter0 = 4 * lay.burn_steps;
            sa.n_steps = lay.half1;
            sa.acc = acc1;
            kernels.run_segment(sa);
            sa.counter0 = 4 * (lay.burn_steps + lay.half1);
            sa.n_steps = lay.half2;
            sa.acc = acc2;
            kernels.run_segment(sa);

            for (int lane = 0; lane < simd::kLanes; ++lane) {
                const std::size_t j = b * simd::kLanes + lane;
                if (j >= n) break;
                if (!(am[lane] <= kDivergenceBound)) {  // also catches NaN
                    auto& slot = worker_diverged[tid];
                    if (slot < 0 || static_cast<std::int64_t>(j) < slot) {
                        slot = static_cast<std::int64_t>(j);
                    }
                }
                for (int k = 0; k < 10; ++k) {
                    const double s1 = acc1[k * simd::kLanes + lane];
                    const double s2 = acc2[k * simd::kLanes + lane];
                    mom[k * n + j] = (s1 + s2) / static_cast<double>(post);
                    mh1[k * n + j] = s1 / static_cast<double>(lay.half1);
                    mh2[k * n + j] = s2 / static_cast<double>(lay.half2);
                }
            }
        }
    };

    if (n_threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    std::int64_t first_diverged = -1;
    for (const auto idx : worker_diverged) {
        if (idx >= 0 && (first_diverged < 0 || idx < first_diverged)) first_diverged = idx;
    }
    if (first_diverged >= 0) {
        throw divergence_error("run_ensemble: |x| exceeded 1e6 on trajectory " +
                               std::to_string(first_diverged));
    }

    EnsembleEstimate est{};
    est.n_effective = n;
    double e_mean[10], e_se[10], e_h1[10], e_h2[10];
    std::vector<double> scratch(n);
    for (int k = 0; k < 10; ++k) {
        const double* mk = mom.data() + static_cast<std::size_t>(k) * n;
        const double sum = pairwise_sum(mk, n);
        const double mean = sum / static_cast<double>(n);
        e_mean[k] = mean;
        for (std::size_t j = 0; j < n; ++j) scratch[j] = mk[j] * mk[j];
        const double sumsq = pairwise_sum(scratch.data(), n);
        double var = 0.0;
        if (n >= 2) {
            var = (sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
            var = std::max(var, 0.0);
        }
        e_se[k] = std::sqrt(var / static_cast<double>(n));
        e_h1[k] = pairwise_sum(mh1.data() + static_cast<std::size_t>(k) * n, n) /
                  static_cast<double>(n);
        e_h2[k] = pairwise_sum(mh2.data() + static_cast<std::size_t>(k) * n, n) /
                  static_cast<double>(n);
    }
    est.sigma_hat = symmetric_from_entries(e_mean);
    est.std_error = symmetric_from_entries(e_se);
    est.sigma_first_half = symmetric_from_entries(e_h1);
    est.sigma_second_half = symmetric_from_entries(e_h2);
    return est;
}

}  // namespace duomode
