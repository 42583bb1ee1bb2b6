#include "facet/rng.hpp"

namespace facet {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) noexcept {
    return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (value + 0x632be59bd9b4e019ULL));
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace facet
