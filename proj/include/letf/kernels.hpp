#pragma once

// Data-parallel inner loops of the Monte Carlo engine.
//
// Every kernel works on row-major matrices (one simulated path per row) and
// has a scalar reference implementation plus SIMD variants that process four
// paths per register lane group. Lanes run the exact same operation sequence
// as the scalar code, so all variants produce bit-identical output; the
// equivalence tests hold them to that.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace letf::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Outputs of compound_ce, one entry per path.
struct CompoundOut {
    std::span<double> ce;
    std::span<double> r_letf;
    std::span<double> r_etf;
    std::span<std::uint8_t> wiped;  ///< 1 if 1 + x <= 0 or 1 + letf <= 0 anywhere
};

struct GarchCoeffs {
    double mu;
    double phi;
    double omega;
    double alpha;
    double beta;
};

struct GarchShape {
    std::size_t n_paths;
    std::size_t burn;     ///< leading steps simulated but not emitted
    std::size_t n_steps;  ///< emitted steps; innovations have burn + n_steps columns
};

/// Per-path cumulative benchmark/LETF returns and CE.
/// `noise` is either empty or the same shape as `paths` (additive tracking error).
using CompoundFn = void (*)(std::span<const double> paths, std::span<const double> noise,
                            std::size_t n_paths, std::size_t n_steps, double beta, double fee,
                            CompoundOut out);

/// x_t = intercept + phi * x_{t-1} + sigma * z_t starting from x0 per path.
using Ar1Fn = void (*)(std::span<const double> z, std::span<const double> x0, std::size_t n_paths,
                       std::size_t n_steps, double intercept, double phi, double sigma,
                       std::span<double> out);

/// AR(1)-GARCH(1,1) recursion from the unconditional variance, eps_0 = 0,
/// x_0 = mu / (1 - phi). Emitted returns are divided by `divisor`;
/// `variances` may be empty.
using ArGarchFn = void (*)(std::span<const double> z, GarchShape shape, GarchCoeffs c,
                           double divisor, std::span<double> returns, std::span<double> variances);

/// Non-overlapping block compounding of each row; trailing partial block dropped.
using AggregateFn = void (*)(std::span<const double> paths, std::size_t n_paths,
                             std::size_t n_steps, std::size_t block, std::span<double> out);

struct KernelTable {
    Isa isa;
    CompoundFn compound_ce;
    Ar1Fn ar1;
    ArGarchFn ar_garch;
    AggregateFn aggregate;
};

namespace scalar {
void compound_ce(std::span<const double> paths, std::span<const double> noise, std::size_t n_paths,
                 std::size_t n_steps, double beta, double fee, CompoundOut out);
void ar1(std::span<const double> z, std::span<const double> x0, std::size_t n_paths,
         std::size_t n_steps, double intercept, double phi, double sigma, std::span<double> out);
void ar_garch(std::span<const double> z, GarchShape shape, GarchCoeffs c, double divisor,
              std::span<double> returns, std::span<double> variances);
void aggregate(std::span<const double> paths, std::size_t n_paths, std::size_t n_steps,
               std::size_t block, std::span<double> out);
}  // namespace scalar

#if defined(LETF_WITH_AVX2)
namespace avx2 {
void compound_ce(std::span<const double> paths, std::span<const double> noise, std::size_t n_paths,
                 std::size_t n_steps, double beta, double fee, CompoundOut out);
void ar1(std::span<const double> z, std::span<const double> x0, std::size_t n_paths,
         std::size_t n_steps, double intercept, double phi, double sigma, std::span<double> out);
void ar_garch(std::span<const double> z, GarchShape shape, GarchCoeffs c, double divisor,
              std::span<double> returns, std::span<double> variances);
void aggregate(std::span<const double> paths, std::size_t n_paths, std::size_t n_steps,
               std::size_t block, std::span<double> out);
}  // namespace avx2
#endif

/// True if this build contains the variant and the CPU can run it.
bool isa_available(Isa isa) noexcept;

const KernelTable& table_for(Isa isa);

/// Widest available variant, unless LETF_KERNELS=scalar is set in the
/// environment. Resolved once per process.
const KernelTable& active();

}  // namespace letf::kernels
