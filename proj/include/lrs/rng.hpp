#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace lrs {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent stream seed from a root seed, a stream name and
/// any number of integer coordinates (iteration, ant, cell, ...).
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream,
                                 std::initializer_list<std::uint64_t> coords = {}) noexcept {
    std::uint64_t h = splitmix64(root ^ fnv1a(stream));
    for (std::uint64_t c : coords) {
        h = splitmix64(h ^ splitmix64(c));
    }
    return h;
}

/// Seedable generator with platform-independent draws (std distributions are
/// implementation-defined, so they are not used for anything that is logged).
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    Rng(std::uint64_t root, std::string_view stream,
        std::initializer_list<std::uint64_t> coords = {})
        : engine_(derive_seed(root, stream, coords)) {}

    /// Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's nearly-divisionless method.
        unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    std::uint64_t next() noexcept { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace lrs
