#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace reefcover::rng {

// One master seed fans out to named sub-streams so that toggling one feature
// never perturbs another stream's draws. Gaussian sampling is hand-rolled
// (Box-Muller) so that sequences are identical across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a(name)) ^ index);
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}
    Stream(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
        : gen_(substream_seed(master, name, index)) {}

    double uniform() {  // [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stateless per-event coin: deterministic regardless of draw order.
inline bool event_coin(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c, double probability) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ splitmix64(a ^ 0x6A09E667F3BCC908ULL));
    h = splitmix64(h ^ splitmix64(b ^ 0xBB67AE8584CAA73BULL));
    h = splitmix64(h ^ splitmix64(c ^ 0x3C6EF372FE94F82BULL));
    const double u = (h >> 11) * 0x1.0p-53;
    return u < probability;
}

}  // namespace reefcover::rng
