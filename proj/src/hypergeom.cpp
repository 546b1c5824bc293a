#include "neat/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace neat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTailCutoff = 1e-18;  // term / accumulated sum termination

// log C(a,b) in extended precision; the three-term cancellation loses up to
// ~2e-15 absolute in 80-bit, well below the 1e-13 integer-argument target.
long double lchoose(std::int64_t a, std::int64_t b) {
    return std::lgammal(static_cast<long double>(a) + 1) -
           std::lgammal(static_cast<long double>(b) + 1) -
           std::lgammal(static_cast<long double>(a - b) + 1);
}

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// pmf(j+1) / pmf(j)
inline double ratio_up(std::int64_t j, const HypergeomParams& t) {
    return (static_cast<double>(t.successes_in_pop - j) * static_cast<double>(t.draws - j)) /
           (static_cast<double>(j + 1) *
            static_cast<double>(t.pop_size - t.successes_in_pop - t.draws + j + 1));
}

// pmf(j) / pmf(j+1)
inline double ratio_down(std::int64_t j, const HypergeomParams& t) {
    return 1.0 / ratio_up(j, t);
}

}  // namespace

void HypergeomParams::validate() const {
    if (pop_size < 1) throw BadInput("hypergeometric population size must be >= 1");
    if (draws < 0 || draws > pop_size)
        throw BadInput("hypergeometric draws outside [0, N]");
    if (successes_in_pop < 0 || successes_in_pop > pop_size)
        throw BadInput("hypergeometric successes outside [0, N]");
}

HypergeomSupport support(const HypergeomParams& t) {
    return {std::max<std::int64_t>(0, t.draws + t.successes_in_pop - t.pop_size),
            std::min(t.draws, t.successes_in_pop)};
}

namespace {

// n and K are exchangeable; fixing their order makes results for (n,K) and
// (K,n) bitwise identical.
HypergeomParams canonical(const HypergeomParams& t) {
    if (t.draws <= t.successes_in_pop) return t;
    return {t.successes_in_pop, t.draws, t.pop_size};
}

}  // namespace

double log_pmf(std::int64_t k, const HypergeomParams& theta) {
    theta.validate();
    const HypergeomParams t = canonical(theta);
    if (!support(t).contains(k)) return kNegInf;
    const long double v = lchoose(t.successes_in_pop, k) +
                          lchoose(t.pop_size - t.successes_in_pop, t.draws - k) -
                          lchoose(t.pop_size, t.draws);
    return static_cast<double>(v);
}

HypergeomTails tails(std::int64_t k, const HypergeomParams& theta) {
    theta.validate();
    const HypergeomParams t = canonical(theta);
    const HypergeomSupport sup = support(t);

    HypergeomTails out;
    if (k < sup.lo) {
        out = {0, 0, 1, kNegInf, kNegInf, true};
        return out;
    }
    if (k > sup.hi) {
        out = {1, 0, 0, kNegInf, kNegInf, false};
        return out;
    }

    out.log_point = log_pmf(k, t);
    out.point = std::exp(out.log_point);

    // Mode of the pmf; the tail on k's side of it has monotonically
    // decreasing terms moving away from k, so it is summed directly and the
    // other tail is recovered as the complement.
    const std::int64_t mode = std::clamp(
        static_cast<std::int64_t>((static_cast<double>(t.draws + 1) *
                                   static_cast<double>(t.successes_in_pop + 1)) /
                                  static_cast<double>(t.pop_size + 2)),
        sup.lo, sup.hi);
    out.minor_is_lower = k <= mode;

    double minor_log = kNegInf;
    if (out.minor_is_lower) {
        if (k > sup.lo) {
            const double lead = log_pmf(k - 1, t);
            double term = 1.0, acc = 1.0;
            for (std::int64_t j = k - 2; j >= sup.lo; --j) {
                term *= ratio_down(j, t);
                acc += term;
                if (term < kTailCutoff * acc) break;
            }
            minor_log = lead + std::log(acc);
        }
    } else {
        if (k < sup.hi) {
            const double lead = log_pmf(k + 1, t);
            double term = 1.0, acc = 1.0;
            for (std::int64_t j = k + 1; j < sup.hi; ++j) {
                term *= ratio_up(j, t);
                acc += term;
                if (term < kTailCutoff * acc) break;
            }
            minor_log = lead + std::log(acc);
        }
    }
    out.log_minor = minor_log;

    const double minor = std::exp(minor_log);
    const double major = std::max(0.0, 1.0 - minor - out.point);
    out.lower = out.minor_is_lower ? minor : major;
    out.upper = out.minor_is_lower ? major : minor;
    return out;
}

TwoSidedP two_sided_p(std::int64_t k, const HypergeomParams& t) {
    t.validate();
    if (!support(t).contains(k))
        throw BadInput("observed count " + std::to_string(k) +
                       " outside hypergeometric support; inconsistent inputs");

    const HypergeomTails tl = tails(k, t);
    TwoSidedP out;
    out.lower_tail = tl.lower;
    out.upper_tail = tl.upper;
    out.point = tl.point;
    out.p = std::min(1.0, 2.0 * std::min(tl.lower, tl.upper) + tl.point);
    out.p1_min = std::min(1.0, 2.0 * std::min(tl.lower + tl.point, tl.upper + tl.point));

    if (out.p > 1e-290) {
        out.log10_p = std::log10(out.p);
    } else {
        // At this magnitude the minor tail is the directly-summed one;
        // combine it with the point mass in log space.
        const double ln_p = log_sum_exp(std::log(2.0) + tl.log_minor, tl.log_point);
        out.log10_p = ln_p / std::numbers::ln10;
    }
    return out;
}

double null_mean(const HypergeomParams& t) {
    t.validate();
    return static_cast<double>(t.draws) * static_cast<double>(t.successes_in_pop) /
           static_cast<double>(t.pop_size);
}

}  // namespace neat
