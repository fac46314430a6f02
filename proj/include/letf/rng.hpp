#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace letf {

/// Independent random streams per simulated path. Keeping the regime chain
/// and the Brownian increments on separate streams makes Z and W independent
/// by construction.
enum class Stream : std::uint64_t {
    Returns = 1,
    Tracking = 2,
    Regime = 3,
    Brownian = 4,
};

/// Seed for substream (root, stream, index): splitmix64 finalizer chained over
/// the three words. Path i depends only on (root, i), never on scheduling.
std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t index) noexcept;

class PathRng {
public:
    PathRng(std::uint64_t root, Stream stream, std::uint64_t index)
        : engine_(derive_seed(root, stream, index)) {}

    double normal() { return normal_(engine_); }
    void fill_normal(std::span<double> out) {
        for (double& x : out) x = normal_(engine_);
    }
    /// Exponential holding time with the given rate (> 0).
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
    /// Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace letf
