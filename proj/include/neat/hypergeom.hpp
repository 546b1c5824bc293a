#pragma once

#include <cstdint>

#include "neat/error.hpp"

namespace neat {

// Parameters of hypergeom(n, K, N): n draws without replacement from a
// population of N with K marked successes.
struct HypergeomParams {
    std::int64_t draws = 0;            // n
    std::int64_t successes_in_pop = 0; // K
    std::int64_t pop_size = 1;         // N

    void validate() const;
};

struct HypergeomSupport {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool contains(std::int64_t k) const { return k >= lo && k <= hi; }
};

HypergeomSupport support(const HypergeomParams& theta);

// Exact log of C(K,k) C(N-K,n-k) / C(N,n); -inf outside the support.
double log_pmf(std::int64_t k, const HypergeomParams& theta);

// P(T<k), P(T=k), P(T>k). The minor tail (the one not containing the mode)
// is summed directly from the point mass outward with early termination at
// 1e-18 of the accumulated sum; the major tail is its complement. Log values
// of the directly-summed quantities stay finite below double underflow.
struct HypergeomTails {
    double lower = 0;
    double point = 0;
    double upper = 0;
    double log_minor = 0;       // natural log of the directly-summed tail
    double log_point = 0;       // natural log of P(T=k)
    bool minor_is_lower = true; // which side log_minor refers to
};

HypergeomTails tails(std::int64_t k, const HypergeomParams& theta);

// Two-sided p-value 2*min[P(T<k), P(T>k)] + P(T=k), always in [0,1].
struct TwoSidedP {
    double p = 1;
    double lower_tail = 0;
    double upper_tail = 0;
    double point = 1;
    double log10_p = 0;  // finite even when p underflows double
    double p1_min = 1;   // min(2*min[P(T<=k), P(T>=k)], 1), diagnostic
};

// Throws BadInput when k lies outside the support (inconsistent inputs).
TwoSidedP two_sided_p(std::int64_t k, const HypergeomParams& theta);

// n*K/N.
double null_mean(const HypergeomParams& theta);

}  // namespace neat
