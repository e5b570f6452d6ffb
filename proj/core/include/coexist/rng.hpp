#pragma once

#include <cstdint>
#include <limits>

namespace coexist {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// SplitMix64 engine. A drop seeds half a dozen streams and one per interferer,
/// so seeding has to be free; a Weyl counter through mix64 gives that.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        const std::uint64_t s = state_;
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(s);
    }

    constexpr void discard(unsigned long long n) noexcept { state_ += n * 0x9e3779b97f4a7c15ULL; }

    friend constexpr bool operator==(const SplitMix64&, const SplitMix64&) = default;

private:
    std::uint64_t state_;
};

using Rng = SplitMix64;

inline constexpr std::uint64_t kDefaultSeed = 20160901;

/// Seed of the stream for (seed, index, stream).
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept
{
    return mix64(mix64(mix64(seed) ^ index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

/// Independent stream for (seed, index, stream); used so that drop i of a run
/// never depends on how many drops precede it or which worker runs it.
constexpr Rng make_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept
{
    return Rng(stream_key(seed, index, stream));
}

/// Substream `i` of a stream key, e.g. the fading gain of the i-th AP.
constexpr Rng substream(std::uint64_t key, std::uint64_t i) noexcept
{
    return Rng(mix64(key ^ (i * 0xa0761d6478bd642fULL)));
}

} // namespace coexist
