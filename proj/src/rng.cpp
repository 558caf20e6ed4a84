#include "amcmc/rng.hpp"

#include <cmath>

namespace amcmc {

double Rng::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gaussian_;
    }
    const double u1 = next_open_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_gaussian_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

void Rng::jump() {
    static constexpr std::uint64_t kJump[] = {
        0x180EC6D33CFD0ABAULL, 0xD5A61266F0C9392CULL,
        0xA9582618E03FC9AAULL, 0x39ABDC4529B1661CULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
        for (int bit = 0; bit < 64; ++bit) {
            if (word & (1ULL << bit)) {
                acc[0] ^= state_[0];
                acc[1] ^= state_[1];
                acc[2] ^= state_[2];
                acc[3] ^= state_[3];
            }
            next_u64();
        }
    }
    state_ = acc;
    has_cached_ = false;
}

}  // namespace amcmc
