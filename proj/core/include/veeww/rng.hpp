#pragma once

// Counter-based random numbers: Philox4x32-10 (Salmon et al., SC'11).
//
// Every output is a pure function of (seed, stream, sample index, block),
// so samples can be generated in any order or on any number of workers and
// still come out bit-identical. The mapping is pinned as version 1:
//
//   key     = { seed lo32, seed hi32 }
//   counter = { block, sample index, stream lo32, stream hi32 }
//
// Each block yields two doubles, each built from 53 bits of a pair of
// output words as (x + 0.5) * 2^-53, which lies strictly inside (0, 1).

#include <array>
#include <cstdint>

namespace veeww::rng {

inline constexpr int kMappingVersion = 1;

using Philox4x32Block = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection.
Philox4x32Block philox4x32(Philox4x32Block counter, Philox4x32Key key) noexcept;

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

/// Sequential uniforms for one sample index. Cheap to construct.
class CounterStream {
public:
    CounterStream(RngSpec spec, std::uint32_t sample_index) noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Number of Philox blocks consumed so far.
    std::uint32_t blocks_used() const noexcept { return block_; }

private:
    Philox4x32Key key_;
    std::uint32_t sample_index_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint32_t block_ = 0;
    Philox4x32Block buffer_{};
    int cursor_ = 2;
};

}  // namespace veeww::rng
