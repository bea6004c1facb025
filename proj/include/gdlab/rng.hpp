#pragma once

#include <cstdint>
#include <cmath>

namespace gdlab {

// Counter-based random streams (Philox4x32-10). A stream is keyed by
// (master_seed, stream_id); draws walk a 128-bit block counter, so replicas
// get statistically independent streams and results never depend on
// scheduling or worker count.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(uint64_t master_seed, uint64_t stream_id) {
        key_[0] = static_cast<uint32_t>(master_seed);
        key_[1] = static_cast<uint32_t>(master_seed >> 32);
        stream_lo_ = static_cast<uint32_t>(stream_id);
        stream_hi_ = static_cast<uint32_t>(stream_id >> 32);
    }

    uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), unbiased (rejection).
    uint32_t below(uint32_t n) {
        const uint32_t lim = UINT32_MAX - UINT32_MAX % n;
        uint32_t v;
        do {
            v = next_u32();
        } while (v >= lim);
        return v % n;
    }

    /// Standard normal draw (Box-Muller; the second variate is cached).
    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - next_unit();  // (0,1]
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

  private:
    static constexpr uint32_t kM0 = 0xD2511F53u;
    static constexpr uint32_t kM1 = 0xCD9E8D57u;
    static constexpr uint32_t kW0 = 0x9E3779B9u;
    static constexpr uint32_t kW1 = 0xBB67AE85u;

    void refill() {
        uint32_t x0 = static_cast<uint32_t>(block_);
        uint32_t x1 = static_cast<uint32_t>(block_ >> 32);
        uint32_t x2 = stream_lo_;
        uint32_t x3 = stream_hi_;
        uint32_t k0 = key_[0];
        uint32_t k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = static_cast<uint64_t>(kM0) * x0;
            uint64_t p1 = static_cast<uint64_t>(kM1) * x2;
            uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
            uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
            uint32_t y0 = hi1 ^ x1 ^ k0;
            uint32_t y1 = lo1;
            uint32_t y2 = hi0 ^ x3 ^ k1;
            uint32_t y3 = lo0;
            x0 = y0; x1 = y1; x2 = y2; x3 = y3;
            k0 += kW0;
            k1 += kW1;
        }
        buf_[0] = x0; buf_[1] = x1; buf_[2] = x2; buf_[3] = x3;
        ++block_;
        pos_ = 0;
    }

    uint32_t key_[2];
    uint32_t stream_lo_, stream_hi_;
    uint64_t block_ = 0;
    uint32_t buf_[4] = {};
    int pos_ = 4;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace gdlab
