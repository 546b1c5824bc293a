#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace neat {

// xoshiro256** seeded through splitmix64. Substreams are derived from the
// root seed, not from the current state, so stream(i) is independent of how
// many draws the parent has consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : root_seed_(seed) {
        std::uint64_t x = seed;
        for (auto& si : s_) si = splitmix64(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::uint64_t root_seed() const { return root_seed_; }

    // Derived stream: deterministic in (root seed, tag) only.
    Rng stream(std::uint64_t tag) const {
        std::uint64_t x = root_seed_ ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
        return Rng(splitmix64(x));
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Inversion by sequential search; fine for the lambdas used here (<= ~1e3).
    int poisson(double lambda) {
        double p = std::exp(-lambda);
        double cum = p;
        const double u = uniform01();
        int k = 0;
        while (u > cum && k < 100000) {
            ++k;
            p *= lambda / k;
            cum += p;
        }
        return k;
    }

    // Fisher-Yates; implemented here so shuffles do not depend on the
    // standard library's unspecified std::shuffle algorithm.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Partial Fisher-Yates: after the call, v[0..k) is a uniform k-subset.
    template <class T>
    void partial_shuffle(std::vector<T>& v, std::size_t k) {
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(v[i], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t root_seed_;
    std::uint64_t s_[4];
};

}  // namespace neat
