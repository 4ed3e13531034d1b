#include "homcover/rng.hpp"

#include <cmath>
#include <numbers>

namespace homcover {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngSpec RngSpec::child(std::uint64_t tag) const {
    return RngSpec{seed, splitmix64(splitmix64(stream) ^ (tag * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL))};
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t block = word_ >> 1;
    if (block != cached_block_) {
        const PhiloxCounter ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                                static_cast<std::uint32_t>(spec_.stream),
                                static_cast<std::uint32_t>(spec_.stream >> 32)};
        const PhiloxKey key{static_cast<std::uint32_t>(spec_.seed), static_cast<std::uint32_t>(spec_.seed >> 32)};
        const PhiloxCounter out = philox4x32(ctr, key);
        cache_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        cache_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        cached_block_ = block;
    }
    return cache_[word_++ & 1U];
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Point RandomStream::direction(std::size_t dim) {
    Point d(dim);
    for (;;) {
        for (double& v : d) v = normal();
        const double len = norm2(d);
        if (len > 1e-12) {
            for (double& v : d) v /= len;
            return d;
        }
    }
}

void RandomStream::seek(std::uint64_t word) { word_ = word; }

}  // namespace homcover
