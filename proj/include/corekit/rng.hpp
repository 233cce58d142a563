#pragma once

#include <cmath>
#include <cstdint>

namespace corekit {

// 64-bit finalizer from splitmix64 (Steele, Lea, Flood; Vigna's fixed-increment
// variant). Passes BigCrush; good enough for every statistical test in this
// toolkit and trivially reproducible across platforms.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = UINT64_C(0x9E3779B97F4A7C15);

// FNV-1a over a short purpose string, used to label independent streams
// ("lwcs/branch", "dsq/pick", ...). constexpr so tags are compile-time.
constexpr std::uint64_t stream_tag(const char* s) {
    std::uint64_t h = UINT64_C(1469598103934665603);
    while (*s != '\0') {
        h ^= static_cast<unsigned char>(*s++);
        h *= UINT64_C(1099511628211);
    }
    return h;
}

// Derives an independent substream seed, e.g. per machine or per restart.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t id) {
    return mix64(seed ^ mix64(kGoldenGamma ^ (id + 1)));
}

// Counter-based uniform stream. Stream identity is (seed, tag); the i-th
// value is mix64(base + (i+1)*gamma), i.e. splitmix64 started at a derived
// state and evaluated at counter i. Draws are index-addressed: a worker can
// produce draw j without generating draws 0..j-1, and the set of values a
// stream yields is independent of how many other streams were consumed.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t tag)
        : base_(mix64(seed ^ mix64(tag))) {}

    std::uint64_t bits_at(std::uint64_t i) const {
        return mix64(base_ + (i + 1) * kGoldenGamma);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform_at(std::uint64_t i) const {
        return static_cast<double>(bits_at(i) >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_open_at(std::uint64_t i) const {
        return static_cast<double>((bits_at(i) >> 11) + 1) * 0x1.0p-53;
    }

    // Sequential convenience cursor over the same stream.
    std::uint64_t next_bits() { return bits_at(cursor_++); }
    double next_uniform() { return uniform_at(cursor_++); }

private:
    std::uint64_t base_;
    std::uint64_t cursor_ = 0;
};

// Standard normal via Box-Muller, exactly two stream values per variate so
// draws stay index-addressed.
inline double gaussian_at(const RandomStream& s1, const RandomStream& s2, std::uint64_t i) {
    const double u1 = s1.uniform_open_at(i);
    const double u2 = s2.uniform_at(i);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace corekit
