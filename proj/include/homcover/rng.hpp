#pragma once

// Counter-based random streams (Philox4x32-10). A stream is a pure function of
// (seed, stream id, position), so any word can be regenerated without replay.

#include <array>
#include <cstdint>

#include "homcover/point.hpp"

namespace homcover {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// A statistically unrelated stream derived from this one and a tag.
    RngSpec child(std::uint64_t tag) const;

    bool operator==(const RngSpec&) const = default;
};

class RandomStream {
public:
    explicit RandomStream(RngSpec spec) : spec_(spec) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal by Box-Muller; consumes two words.
    double normal();
    /// Uniform direction on the unit sphere.
    Point direction(std::size_t dim);

    /// Jump to the given 64-bit word index.
    void seek(std::uint64_t word);
    std::uint64_t position() const { return word_; }
    const RngSpec& spec() const { return spec_; }

private:
    RngSpec spec_;
    std::uint64_t word_ = 0;
    std::uint64_t cached_block_ = ~std::uint64_t{0};
    std::array<std::uint64_t, 2> cache_{};
};

}  // namespace homcover
