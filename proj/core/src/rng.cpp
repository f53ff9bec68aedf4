#include "ppcorr/rng.hpp"

namespace ppcorr {

Engine make_engine(RngSeed seed, std::uint64_t batch, Substream which) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed.seed),     hi(seed.seed), lo(seed.stream_id), hi(seed.stream_id),
                      lo(batch),         hi(batch),     static_cast<std::uint32_t>(which),
                      0x70706372u};
    return Engine(seq);
}

Streams::Streams(RngSeed seed, std::uint64_t batch)
    : positions(make_engine(seed, batch, Substream::kPositions)),
      fading(make_engine(seed, batch, Substream::kFading)),
      selectors(make_engine(seed, batch, Substream::kSelectors)),
      signal(make_engine(seed, batch, Substream::kSignal)) {}

}  // namespace ppcorr
