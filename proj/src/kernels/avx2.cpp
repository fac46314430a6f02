#include <immintrin.h>

#include <limits>

#include "letf/kernels.hpp"

namespace letf::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

// In-register 4x4 transpose: rows (paths) <-> columns (time steps).
inline void transpose4(__m256d& r0, __m256d& r1, __m256d& r2, __m256d& r3) {
    const __m256d t0 = _mm256_unpacklo_pd(r0, r1);
    const __m256d t1 = _mm256_unpackhi_pd(r0, r1);
    const __m256d t2 = _mm256_unpacklo_pd(r2, r3);
    const __m256d t3 = _mm256_unpackhi_pd(r2, r3);
    r0 = _mm256_permute2f128_pd(t0, t2, 0x20);
    r1 = _mm256_permute2f128_pd(t1, t3, 0x20);
    r2 = _mm256_permute2f128_pd(t0, t2, 0x31);
    r3 = _mm256_permute2f128_pd(t1, t3, 0x31);
}

// Column `t` of four consecutive rows starting at `base`.
inline __m256d column(const double* base, std::size_t stride, std::size_t t) {
    return _mm256_set_pd(base[3 * stride + t], base[2 * stride + t], base[stride + t], base[t]);
}

inline void store_column(double* base, std::size_t stride, std::size_t t, __m256d v) {
    alignas(32) double tmp[kLanes];
    _mm256_store_pd(tmp, v);
    for (std::size_t l = 0; l < kLanes; ++l) base[l * stride + t] = tmp[l];
}

// Loads columns [t, t+4) of four rows and returns them time-major.
struct Block4 {
    __m256d c[kLanes];
};

inline Block4 load_block(const double* base, std::size_t stride, std::size_t t) {
    Block4 b;
    for (std::size_t l = 0; l < kLanes; ++l) b.c[l] = _mm256_loadu_pd(base + l * stride + t);
    transpose4(b.c[0], b.c[1], b.c[2], b.c[3]);
    return b;
}

inline void store_block(double* base, std::size_t stride, std::size_t t, Block4 b) {
    transpose4(b.c[0], b.c[1], b.c[2], b.c[3]);
    for (std::size_t l = 0; l < kLanes; ++l) _mm256_storeu_pd(base + l * stride + t, b.c[l]);
}

}  // namespace

void compound_ce(std::span<const double> paths, std::span<const double> noise, std::size_t n_paths,
                 std::size_t n_steps, double beta, double fee, CompoundOut out) {
    const bool with_noise = !noise.empty();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vbeta = _mm256_set1_pd(beta);
    const __m256d vfee = _mm256_set1_pd(fee);
    const std::size_t full = n_paths - n_paths % kLanes;

    for (std::size_t p = 0; p < full; p += kLanes) {
        const double* x = paths.data() + p * n_steps;
        const double* e = with_noise ? noise.data() + p * n_steps : nullptr;
        __m256d g_etf = one, g_letf = one;
        __m256d lowest = _mm256_set1_pd(std::numeric_limits<double>::infinity());

        auto step = [&](__m256d xt, __m256d et) {
            const __m256d a = _mm256_add_pd(one, xt);
            __m256d r = _mm256_sub_pd(_mm256_mul_pd(vbeta, xt), vfee);
            if (with_noise) r = _mm256_add_pd(r, et);
            const __m256d b = _mm256_add_pd(one, r);
            g_etf = _mm256_mul_pd(g_etf, a);
            g_letf = _mm256_mul_pd(g_letf, b);
            lowest = _mm256_min_pd(lowest, _mm256_min_pd(a, b));
        };

        std::size_t t = 0;
        for (; t + kLanes <= n_steps; t += kLanes) {
            const Block4 xb = load_block(x, n_steps, t);
            Block4 eb{};
            if (with_noise) eb = load_block(e, n_steps, t);
            for (std::size_t j = 0; j < kLanes; ++j) step(xb.c[j], eb.c[j]);
        }
        for (; t < n_steps; ++t)
            step(column(x, n_steps, t), with_noise ? column(e, n_steps, t) : _mm256_setzero_pd());

        const __m256d r_etf = _mm256_sub_pd(g_etf, one);
        const __m256d r_letf = _mm256_sub_pd(g_letf, one);
        const __m256d ce = _mm256_sub_pd(r_letf, _mm256_mul_pd(vbeta, r_etf));
        _mm256_storeu_pd(out.r_etf.data() + p, r_etf);
        _mm256_storeu_pd(out.r_letf.data() + p, r_letf);
        _mm256_storeu_pd(out.ce.data() + p, ce);
        const int alive = _mm256_movemask_pd(_mm256_cmp_pd(lowest, _mm256_setzero_pd(), _CMP_GT_OQ));
        for (std::size_t l = 0; l < kLanes; ++l) out.wiped[p + l] = (alive >> l) & 1 ? 0 : 1;
    }

    if (full < n_paths) {
        const std::size_t rest = n_paths - full;
        CompoundOut tail{out.ce.subspan(full), out.r_letf.subspan(full), out.r_etf.subspan(full),
                         out.wiped.subspan(full)};
        scalar::compound_ce(paths.subspan(full * n_steps),
                            with_noise ? noise.subspan(full * n_steps) : noise, rest, n_steps, beta,
                            fee, tail);
    }
}

void ar1(std::span<const double> z, std::span<const double> x0, std::size_t n_paths,
         std::size_t n_steps, double intercept, double phi, double sigma, std::span<double> out) {
    const __m256d vc = _mm256_set1_pd(intercept);
    const __m256d vphi = _mm256_set1_pd(phi);
    const __m256d vsig = _mm256_set1_pd(sigma);
    const std::size_t full = n_paths - n_paths % kLanes;

    for (std::size_t p = 0; p < full; p += kLanes) {
        const double* zp = z.data() + p * n_steps;
        double* op = out.data() + p * n_steps;
        __m256d x = _mm256_loadu_pd(x0.data() + p);
        auto step = [&](__m256d zt) {
            x = _mm256_add_pd(_mm256_add_pd(vc, _mm256_mul_pd(vphi, x)), _mm256_mul_pd(vsig, zt));
            return x;
        };
        std::size_t t = 0;
        for (; t + kLanes <= n_steps; t += kLanes) {
            Block4 b = load_block(zp, n_steps, t);
            for (std::size_t j = 0; j < kLanes; ++j) b.c[j] = step(b.c[j]);
            store_block(op, n_steps, t, b);
        }
        for (; t < n_steps; ++t) store_column(op, n_steps, t, step(column(zp, n_steps, t)));
    }
    if (full < n_paths)
        scalar::ar1(z.subspan(full * n_steps), x0.subspan(full), n_paths - full, n_steps, intercept,
                    phi, sigma, out.subspan(full * n_steps));
}

void ar_garch(std::span<const double> z, GarchShape shape, GarchCoeffs c, double divisor,
              std::span<double> returns, std::span<double> variances) {
    const std::size_t cols = shape.burn + shape.n_steps;
    const std::size_t n = shape.n_steps;
    const bool keep_var = !variances.empty();
    const __m256d vmu = _mm256_set1_pd(c.mu);
    const __m256d vphi = _mm256_set1_pd(c.phi);
    const __m256d vomega = _mm256_set1_pd(c.omega);
    const __m256d valpha = _mm256_set1_pd(c.alpha);
    const __m256d vbeta = _mm256_set1_pd(c.beta);
    const __m256d vdiv = _mm256_set1_pd(divisor);
    const std::size_t full = shape.n_paths - shape.n_paths % kLanes;

    for (std::size_t p = 0; p < full; p += kLanes) {
        const double* zp = z.data() + p * cols;
        __m256d h = _mm256_set1_pd(c.omega / (1.0 - c.alpha - c.beta));
        __m256d eps = _mm256_setzero_pd();
        __m256d x = _mm256_set1_pd(c.mu / (1.0 - c.phi));

        auto step = [&](__m256d zt) {
            h = _mm256_add_pd(_mm256_add_pd(vomega, _mm256_mul_pd(valpha, _mm256_mul_pd(eps, eps))),
                              _mm256_mul_pd(vbeta, h));
            eps = _mm256_mul_pd(_mm256_sqrt_pd(h), zt);
            x = _mm256_add_pd(_mm256_add_pd(vmu, _mm256_mul_pd(vphi, x)), eps);
        };

        for (std::size_t t = 0; t < shape.burn; ++t) step(column(zp, cols, t));

        const double* ze = zp + shape.burn;
        double* rp = returns.data() + p * n;
        double* vp = keep_var ? variances.data() + p * n : nullptr;
        std::size_t u = 0;
        for (; u + kLanes <= n; u += kLanes) {
            const Block4 zb = load_block(ze, cols, u);
            Block4 rb, vb;
            for (std::size_t j = 0; j < kLanes; ++j) {
                step(zb.c[j]);
                rb.c[j] = _mm256_div_pd(x, vdiv);
                vb.c[j] = h;
            }
            store_block(rp, n, u, rb);
            if (keep_var) store_block(vp, n, u, vb);
        }
        for (; u < n; ++u) {
            step(column(ze, cols, u));
            store_column(rp, n, u, _mm256_div_pd(x, vdiv));
            if (keep_var) store_column(vp, n, u, h);
        }
    }
    if (full < shape.n_paths) {
        GarchShape rest{shape.n_paths - full, shape.burn, shape.n_steps};
        scalar::ar_garch(z.subspan(full * cols), rest, c, divisor, returns.subspan(full * n),
                         keep_var ? variances.subspan(full * n) : variances);
    }
}

void aggregate(std::span<const double> paths, std::size_t n_paths, std::size_t n_steps,
               std::size_t block, std::span<double> out) {
    const std::size_t n_blocks = n_steps / block;
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t full = n_paths - n_paths % kLanes;
    for (std::size_t p = 0; p < full; p += kLanes) {
        const double* x = paths.data() + p * n_steps;
        double* o = out.data() + p * n_blocks;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            __m256d g = one;
            for (std::size_t j = 0; j < block; ++j)
                g = _mm256_mul_pd(g, _mm256_add_pd(one, column(x, n_steps, b * block + j)));
            store_column(o, n_blocks, b, _mm256_sub_pd(g, one));
        }
    }
    if (full < n_paths)
        scalar::aggregate(paths.subspan(full * n_steps), n_paths - full, n_steps, block,
                          out.subspan(full * n_blocks));
}

}  // namespace letf::kernels::avx2
