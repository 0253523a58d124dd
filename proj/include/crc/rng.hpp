#pragma once

#include <array>
#include <cstdint>

namespace crc {

// Philox-4x32-10 counter-based block generator. The whole variate stream is a
// pure function of (key, counter), so any position can be regenerated without
// replaying the sequence. Verified against the published known-answer vectors.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);

    // counter layout used by RngStream: hi 64 bits = path index, lo 64 bits = block index
    static std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t ctr_hi,
                                              std::uint64_t ctr_lo);
};

// Per-path variate stream keyed by (seed, path_index). Streams with different
// path indices are independent; the sequence does not depend on thread
// scheduling. Draw layout (one 64-bit word per draw):
//   next_uniform()  consumes 1 word
//   next_normal()   consumes 1 word (inverse-CDF transform)
// so a consumer that uses a fixed number of draws per step can be replayed
// from (seed, path_index) alone, or repositioned with skip_to().
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t path_index)
        : seed_(seed), path_(path_index) {}

    double next_uniform();  // in (0,1), never exactly 0 or 1
    double next_normal();   // standard normal via inverse CDF

    std::uint64_t position() const { return count_; }
    void skip_to(std::uint64_t draw_index) { count_ = draw_index; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path_index() const { return path_; }

  private:
    std::uint64_t word_at(std::uint64_t index) const;

    std::uint64_t seed_;
    std::uint64_t path_;
    std::uint64_t count_ = 0;
};

// Inverse standard normal CDF, full double accuracy (Acklam's rational
// approximation polished with one Halley step on erfc).
double normal_inverse_cdf(double p);

}  // namespace crc
