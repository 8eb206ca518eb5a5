#include "ssr/rng.hpp"

#include <cmath>
#include <numbers>

namespace ssr {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::derive(std::uint64_t base_seed, std::uint64_t trial,
                            StreamPurpose purpose) {
    std::uint64_t k = mix64(base_seed);
    k = mix64(k ^ (trial * 0xd1b54a32d192ed03ULL));
    k = mix64(k ^ (static_cast<std::uint64_t>(purpose) * 0x8cb92ba72f3d8dd7ULL));
    return RngStream(k);
}

std::uint64_t RngStream::next_u64() {
    return mix64(key_ ^ mix64(counter_++));
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    ++gaussians_;
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open_low()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace ssr
