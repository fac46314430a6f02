#include <algorithm>
#include <cmath>
#include <limits>

#include "letf/kernels.hpp"

namespace letf::kernels::scalar {

void compound_ce(std::span<const double> paths, std::span<const double> noise, std::size_t n_paths,
                 std::size_t n_steps, double beta, double fee, CompoundOut out) {
    const bool with_noise = !noise.empty();
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double* x = paths.data() + p * n_steps;
        const double* e = with_noise ? noise.data() + p * n_steps : nullptr;
        double g_etf = 1.0, g_letf = 1.0;
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n_steps; ++t) {
            const double a = 1.0 + x[t];
            double r = beta * x[t] - fee;
            if (with_noise) r = r + e[t];
            const double b = 1.0 + r;
            g_etf *= a;
            g_letf *= b;
            lowest = std::min(lowest, std::min(a, b));
        }
        out.r_etf[p] = g_etf - 1.0;
        out.r_letf[p] = g_letf - 1.0;
        out.ce[p] = out.r_letf[p] - beta * out.r_etf[p];
        out.wiped[p] = lowest > 0.0 ? 0 : 1;
    }
}

void ar1(std::span<const double> z, std::span<const double> x0, std::size_t n_paths,
         std::size_t n_steps, double intercept, double phi, double sigma, std::span<double> out) {
    for (std::size_t p = 0; p < n_paths; ++p) {
        double x = x0[p];
        const double* zp = z.data() + p * n_steps;
        double* op = out.data() + p * n_steps;
        for (std::size_t t = 0; t < n_steps; ++t) {
            x = intercept + phi * x + sigma * zp[t];
            op[t] = x;
        }
    }
}

void ar_garch(std::span<const double> z, GarchShape shape, GarchCoeffs c, double divisor,
              std::span<double> returns, std::span<double> variances) {
    const std::size_t cols = shape.burn + shape.n_steps;
    const double h0 = c.omega / (1.0 - c.alpha - c.beta);
    const double x0 = c.mu / (1.0 - c.phi);
    for (std::size_t p = 0; p < shape.n_paths; ++p) {
        const double* zp = z.data() + p * cols;
        double h = h0, eps = 0.0, x = x0;
        for (std::size_t t = 0; t < cols; ++t) {
            h = c.omega + c.alpha * (eps * eps) + c.beta * h;
            eps = std::sqrt(h) * zp[t];
            x = c.mu + c.phi * x + eps;
            if (t >= shape.burn) {
                const std::size_t u = p * shape.n_steps + (t - shape.burn);
                returns[u] = x / divisor;
                if (!variances.empty()) variances[u] = h;
            }
        }
    }
}

void aggregate(std::span<const double> paths, std::size_t n_paths, std::size_t n_steps,
               std::size_t block, std::span<double> out) {
    const std::size_t n_blocks = n_steps / block;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double* x = paths.data() + p * n_steps;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            double g = 1.0;
            for (std::size_t j = 0; j < block; ++j) g *= 1.0 + x[b * block + j];
            out[p * n_blocks + b] = g - 1.0;
        }
    }
}

}  // namespace letf::kernels::scalar
