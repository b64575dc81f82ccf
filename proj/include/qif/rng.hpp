#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace qif {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for a named consumer of the root seed. Streams are independent of
/// each other, so adding a consumer never perturbs existing ones.
inline std::uint64_t derive_stream_seed(std::uint64_t root, std::string_view stream) {
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a
    for (const char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return splitmix64(root ^ splitmix64(h));
}

/// Indexed child seed (per-example dropout masks, per-pass seeds, ...).
inline std::uint64_t derive_substream_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base + 0x632be59bd9b4e019ull * (index + 1));
}

/// Deterministic random source. The raw generator is std::mt19937_64 (fully
/// specified by the standard); uniform and normal variates are derived here
/// rather than through std::*_distribution, whose output is
/// implementation-defined.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) : gen_(seed) {}

    StreamRng(std::uint64_t root, std::string_view stream)
        : gen_(derive_stream_seed(root, stream)) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two fresh uniforms per call).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, n) without modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

template <typename T>
void shuffle_in_place(std::vector<T>& items, StreamRng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[rng.below(i)]);
    }
}

}  // namespace qif
