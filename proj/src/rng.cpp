#include "epindex/rng.hpp"

#include <cmath>
#include <numbers>

#include "epindex/errors.hpp"

namespace epindex {

double Rng::normal(double mu, double sigma) {
    if (sigma <= 0.0) throw Error(Errc::domain_error, "normal() needs sigma > 0");
    double u1 = uniform_open_closed();
    double u2 = uniform_open_closed();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi_v<double> * u2);
    return mu + sigma * z;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, int year, std::string_view stream_id) {
    std::uint64_t h = fnv1a(stream_id);
    h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(year)) * 0x9e3779b97f4a7c15ULL;
    return splitmix64(master ^ splitmix64(h));
}

}  // namespace epindex
