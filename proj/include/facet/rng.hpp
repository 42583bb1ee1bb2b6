#ifndef FACET_RNG_HPP
#define FACET_RNG_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace facet {

/// SplitMix64 generator. Every random decision in the library goes through
/// this type so that splits and rater shuffles are reproducible across
/// implementations; the exact algorithm is documented in docs/rng.md.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) by rejection; bound must be > 0.
    std::uint64_t bounded(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) {
                return x % bound;
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Fisher-Yates, walking from the last element down.
template <class T>
void shuffle(std::span<T> items, SplitMix64& rng) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(items[i - 1], items[j]);
    }
}

/// SplitMix64 finalizer applied to a single value.
std::uint64_t mix64(std::uint64_t value) noexcept;

/// Order-sensitive combination of two 64-bit values into a derived seed.
std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) noexcept;

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Derived seed for (seed, text) pairs such as attribute names.
inline std::uint64_t combine_seed(std::uint64_t seed, std::string_view text) noexcept {
    return combine_seed(seed, fnv1a64(text));
}

}  // namespace facet

#endif
