#ifndef RISNET_RNG_HPP
#define RISNET_RNG_HPP

#include <array>
#include <cstdint>

namespace risnet {

/// Identifies a reproducible family of random streams.
///
/// A draw is a pure function of (seed, stream_id, trial index, domain, branch,
/// position), so Monte Carlo loops give the same numbers for any worker count
/// or scheduling order.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace detail

/// Philox4x32-10 counter-based block cipher.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(Key key) : key_(key) {}

    [[nodiscard]] Counter operator()(Counter ctr) const {
        Key key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint32_t hi0, lo0, hi1, lo1;
            detail::mulhilo32(kMul0, ctr[0], hi0, lo0);
            detail::mulhilo32(kMul1, ctr[2], hi1, lo1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53U;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

    Key key_;
};

/// Draw domains keep the RIS cascade and relay baselines on disjoint counters.
enum class DrawDomain : std::uint32_t { ris_cascade = 0, relay_hops = 1, single_branch = 2 };

/// Sequential uniforms for one (trial, domain, branch) triple.
class TrialStream {
public:
    TrialStream(const Philox4x32& cipher, std::uint64_t trial, DrawDomain domain,
                std::uint32_t branch)
        : cipher_(&cipher),
          trial_lo_(static_cast<std::uint32_t>(trial)),
          trial_hi_(static_cast<std::uint32_t>(trial >> 32)),
          tag_((static_cast<std::uint32_t>(domain) << 28) | (branch & 0x0FFFFFFFU)) {}

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double next_uniform() {
        if (cursor_ == 2) {
            refill();
        }
        const std::uint64_t bits = buffer_[cursor_++];
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    void refill() {
        const auto out = cipher_->operator()({block_++, tag_, trial_lo_, trial_hi_});
        buffer_[0] = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        buffer_[1] = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        cursor_ = 0;
    }

    const Philox4x32* cipher_;
    std::uint32_t trial_lo_;
    std::uint32_t trial_hi_;
    std::uint32_t tag_;
    std::uint32_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int cursor_ = 2;
};

/// Keyed stream factory for an RngSpec.
class CounterRng {
public:
    explicit CounterRng(RngSpec spec) : spec_(spec), cipher_(make_key(spec)) {}

    [[nodiscard]] TrialStream stream(std::uint64_t trial, DrawDomain domain,
                                     std::uint32_t branch = 0) const {
        return TrialStream(cipher_, trial, domain, branch);
    }

    [[nodiscard]] const RngSpec& spec() const { return spec_; }

private:
    static Philox4x32::Key make_key(RngSpec spec) {
        const std::uint64_t k = detail::splitmix64(spec.seed ^ detail::splitmix64(spec.stream_id));
        return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    RngSpec spec_;
    Philox4x32 cipher_;
};

}  // namespace risnet

#endif  // RISNET_RNG_HPP
