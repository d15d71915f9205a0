#ifndef CHEAPBOOT_RNG_HPP
#define CHEAPBOOT_RNG_HPP

#include <array>
#include <cstdint>

namespace cheapboot {

// Identifies one pseudo-random stream. Every stream is a pure function of
// all four fields (plus the StreamKind chosen by the call site), so any
// (repetition, resample, source) unit of work can be generated out of order
// and in parallel with bit-identical results.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t repetition = 0;
    std::uint64_t resample = 0;  // b = 0 is reserved for data generation
    std::uint64_t source = 0;

    SeedSpec with_resample(std::uint64_t b) const {
        SeedSpec s = *this;
        s.resample = b;
        return s;
    }
    SeedSpec with_source(std::uint64_t j) const {
        SeedSpec s = *this;
        s.source = j;
        return s;
    }
};

// Key-domain separators so that distinct uses of the same SeedSpec
// (drawing data, drawing resample indices, driving a simulation run)
// never share a stream.
enum class StreamKind : std::uint64_t {
    data = 0x64617461'67656e00ULL,
    resample = 0x72657361'6d706c65ULL,
    simulation = 0x73696d75'6c617465ULL,
};

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

// Philox 4x64, 10 rounds (Salmon et al.). Counter-based: the output block
// is a pure function of (counter, key) with no sequential state.
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
    constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t M1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t W1 = 0xBB67AE8584CAA73BULL;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo64(M0, ctr[0], hi0, lo0);
        mulhilo64(M1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

}  // namespace detail

// Buffered view of one Philox stream: (repetition, resample, source) select
// the stream, an internal block counter walks along it.
class CounterStream {
  public:
    CounterStream(const SeedSpec& seed, StreamKind kind)
        : key_{seed.master_seed, static_cast<std::uint64_t>(kind)},
          prefix_{seed.repetition, seed.resample, seed.source} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = detail::philox4x64({prefix_[0], prefix_[1], prefix_[2], block_++}, key_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Uniform on the open interval (0, 1); never returns an exact 0 or 1,
    // so inverse-CDF transforms stay finite.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Unbiased uniform draw from {0, ..., n-1} (Lemire multiply-shift with
    // rejection of the biased residue range).
    std::uint64_t bounded(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 3> prefix_;
    std::array<std::uint64_t, 4> buf_{};
    std::uint64_t block_ = 0;
    int pos_ = 4;
};

// SplitMix64 finalizer; used to fold auxiliary integers (grid cell sizes,
// preset ids) into a derived master seed without stream collisions.
inline std::uint64_t mix_seed(std::uint64_t x, std::uint64_t salt) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace cheapboot

#endif
