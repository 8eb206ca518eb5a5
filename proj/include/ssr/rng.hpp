#pragma once

#include <cstdint>

namespace ssr {

/// Purposes that get their own stream inside a trial, so that turning on
/// extra consumers never shifts another stream's draws.
enum class StreamPurpose : std::uint64_t { PlanningNoise = 1, Environment = 2, Aux = 3 };

/// Counter-based generator: draw i is a SplitMix64 finalisation of
/// (key, i). Any (key, counter) pair maps to a fixed 64-bit word, so a
/// stream is reproducible and its consumption is auditable via counter().
class RngStream {
public:
    explicit RngStream(std::uint64_t key = 0) : key_(key) {}

    static RngStream derive(std::uint64_t base_seed, std::uint64_t trial, StreamPurpose purpose);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 bits.
    double uniform();
    /// Uniform in (0, 1].
    double uniform_open_low() { return 1.0 - uniform(); }
    /// Standard normal via Box-Muller; each transform yields two draws, the
    /// second is kept for the next call.
    double gaussian();
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }
    std::uint64_t gaussians_drawn() const { return gaussians_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::uint64_t gaussians_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace ssr
