#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace epindex {

// Pinned random source so fixtures regenerate identically across runs,
// platforms, and reimplementations:
//   engine    std::mt19937_64 seeded directly with the 64-bit seed
//   uniform   ((next() >> 11) + 1) * 2^-53, in (0, 1]
//   normal    Box-Muller, sqrt(-2 ln u1) * cos(2 pi u2), cosine branch only
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on (0, 1]; never returns 0, safe under log().
    double uniform_open_closed() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double normal(double mu, double sigma);

private:
    std::mt19937_64 engine_;
};

// Stable sub-stream seed for (master seed, year, stream id): FNV-1a over the
// id bytes folded with the year, then one splitmix64 mixing round.
std::uint64_t derive_seed(std::uint64_t master, int year, std::string_view stream_id);

}  // namespace epindex
