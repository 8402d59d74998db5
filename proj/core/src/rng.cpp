#include "veeww/rng.hpp"

namespace veeww::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32Block philox4x32(Philox4x32Block ctr, Philox4x32Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

CounterStream::CounterStream(RngSpec spec, std::uint32_t sample_index) noexcept
    : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
      sample_index_(sample_index),
      stream_lo_(static_cast<std::uint32_t>(spec.stream)),
      stream_hi_(static_cast<std::uint32_t>(spec.stream >> 32)) {}

double CounterStream::uniform() noexcept {
    if (cursor_ == 2) {
        buffer_ = philox4x32({block_, sample_index_, stream_lo_, stream_hi_}, key_);
        ++block_;
        cursor_ = 0;
    }
    const std::size_t base = static_cast<std::size_t>(2 * cursor_);
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(buffer_[base]) << 32 | buffer_[base + 1]) >> 11;
    ++cursor_;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace veeww::rng
