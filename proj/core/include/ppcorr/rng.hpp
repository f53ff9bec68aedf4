#pragma once

#include <cstdint>
#include <random>

namespace ppcorr {

/// Root seed plus a sub-stream index. Identical seeds give identical samples.
struct RngSeed {
    std::uint64_t seed = 1;
    std::uint64_t stream_id = 0;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

/// Independent randomness consumers within one realization.
enum class Substream : std::uint32_t {
    kPositions = 0,  ///< interferer counts and locations
    kFading = 1,     ///< interferer-to-observer fading
    kSelectors = 2,  ///< mixture selectors A_i
    kSignal = 3,     ///< reference-link fading
};

/// Engine for (seed, stream_id, batch, substream), seeded through std::seed_seq.
Engine make_engine(RngSeed seed, std::uint64_t batch, Substream which);

/// One engine per substream, so models driven by the same seed share
/// positions and fading draws (common random numbers).
struct Streams {
    Streams(RngSeed seed, std::uint64_t batch);

    Engine positions;
    Engine fading;
    Engine selectors;
    Engine signal;
};

}  // namespace ppcorr
