#pragma once

// Log-space combinatorics and distribution kernels.
//
// Probabilities in this header are carried as natural logarithms from end to
// end. A one-tailed Fisher p-value for a strongly enriched term is easily
// below 1e-300, so nothing here exponentiates until a caller asks for it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fishtf/cell_stats.hpp"
#include "fishtf/error.hpp"

namespace fishtf {

/// A probability stored as its natural logarithm.
class LogProb {
public:
    /// ln 1.
    constexpr LogProb() = default;

    /// Wraps a log value. Positive values up to 1e-9 are summation noise and
    /// are clamped to 0; anything larger is not a probability.
    static LogProb from_log(double value)
    {
        if (std::isnan(value) || value > 1e-9)
            throw Error(Errc::invalid_probability,
                        "log-probability must be <= 0, got " + std::to_string(value));
        return LogProb(std::min(value, 0.0));
    }

    static LogProb from_prob(double p)
    {
        if (!(p >= 0.0 && p <= 1.0))
            throw Error(Errc::invalid_probability, "probability outside [0, 1]");
        return LogProb(p == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(p));
    }

    static constexpr LogProb one() { return LogProb(0.0); }
    static constexpr LogProb zero() { return LogProb(-std::numeric_limits<double>::infinity()); }

    constexpr double value() const { return value_; }
    double prob() const { return std::exp(value_); }
    constexpr bool is_zero() const { return value_ == -std::numeric_limits<double>::infinity(); }

    friend constexpr bool operator==(LogProb, LogProb) = default;
    friend constexpr auto operator<=>(LogProb a, LogProb b) { return a.value_ <=> b.value_; }

private:
    constexpr explicit LogProb(double v) : value_(v) {}
    double value_ = 0.0;
};

/// ln(exp(a) + exp(b)) anchored at the larger argument.
inline double log_add(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    return a + std::log1p(std::exp(b - a));
}

/// Arguments of the hypergeometric law: `observed` successes in a sample of
/// `draws` items taken without replacement from `population` items, of which
/// `successes` are marked.
struct HypergeomParams {
    std::uint64_t observed = 0;
    std::uint64_t successes = 0;
    std::uint64_t draws = 0;
    std::uint64_t population = 0;

    void validate() const
    {
        if (successes > population || draws > population)
            throw Error(Errc::invalid_params,
                        "hypergeometric parameters need successes <= population and draws <= population");
    }

    std::uint64_t support_min() const
    {
        const std::uint64_t failures = population - successes;
        return draws > failures ? draws - failures : 0;
    }
    std::uint64_t support_max() const { return std::min(successes, draws); }
};

namespace detail {

inline constexpr std::uint64_t log_factorial_table_size = 10'000;

inline const std::vector<long double>& log_factorial_table()
{
    static const std::vector<long double> table = [] {
        std::vector<long double> t(log_factorial_table_size + 1);
        long double acc = 0.0L;
        t[0] = 0.0L;
        for (std::uint64_t k = 1; k <= log_factorial_table_size; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = acc;
        }
        return t;
    }();
    return table;
}

inline long double log_factorial_ld(std::uint64_t x)
{
    if (x <= log_factorial_table_size)
        return log_factorial_table()[x];
    return std::lgamma(static_cast<long double>(x) + 1.0L);
}

inline long double log_choose_ld(std::uint64_t a, std::uint64_t b)
{
    if (b > a)
        throw Error(Errc::invalid_choose,
                    "C(" + std::to_string(a) + ", " + std::to_string(b) + ") needs b <= a");
    const std::uint64_t lo = std::min(b, a - b);
    if (lo == 0)
        return 0.0L;
    return log_factorial_ld(a) - log_factorial_ld(lo) - log_factorial_ld(a - lo);
}

} // namespace detail

/// ln(x!). Exact prefix sums up to 10^4, log-gamma above, both carried in
/// extended precision.
inline double log_factorial(std::uint64_t x)
{
    return static_cast<double>(detail::log_factorial_ld(x));
}

/// ln C(a, b). Evaluated on the smaller of b and a - b so the result is
/// bitwise symmetric.
inline double log_choose(std::uint64_t a, std::uint64_t b)
{
    return static_cast<double>(detail::log_choose_ld(a, b));
}

/// ln h(k; K, s, N). Zero probability outside the support.
inline LogProb log_hypergeom_pmf(const HypergeomParams& p)
{
    p.validate();
    if (p.observed < p.support_min() || p.observed > p.support_max())
        return LogProb::zero();
    if (p.support_min() == p.support_max())
        return LogProb::one();
    const long double v = detail::log_choose_ld(p.successes, p.observed)
        + detail::log_choose_ld(p.population - p.successes, p.draws - p.observed)
        - detail::log_choose_ld(p.population, p.draws);
    return LogProb::from_log(static_cast<double>(v));
}

/// ln b(k; s, prob).
inline LogProb log_binom_pmf(std::uint64_t k, std::uint64_t s, double prob)
{
    if (!(prob >= 0.0 && prob <= 1.0))
        throw Error(Errc::invalid_probability, "binomial success probability outside [0, 1]");
    if (k > s)
        return LogProb::zero();
    if (prob == 0.0)
        return k == 0 ? LogProb::one() : LogProb::zero();
    if (prob == 1.0)
        return k == s ? LogProb::one() : LogProb::zero();
    const double v = log_choose(s, k) + static_cast<double>(k) * std::log(prob)
        + static_cast<double>(s - k) * std::log1p(-prob);
    return LogProb::from_log(v);
}

/// ln H(k; K, s, N) = ln sum_{t >= k} h(t; K, s, N).
///
/// Terms are accumulated from the top of the support down to k with a running
/// log-sum-exp, so the extreme-tail terms are never exponentiated on their own.
/// k at or below the lower support edge gives exactly ln 1; k past the upper
/// edge gives ln 0.
inline LogProb log_hypergeom_tail(const HypergeomParams& p)
{
    p.validate();
    const std::uint64_t lo = p.support_min();
    const std::uint64_t hi = p.support_max();
    if (p.observed <= lo)
        return LogProb::one();
    if (p.observed > hi)
        return LogProb::zero();

    const long double log_total = detail::log_choose_ld(p.population, p.draws);
    const std::uint64_t failures = p.population - p.successes;
    double acc = -std::numeric_limits<double>::infinity();
    for (std::uint64_t t = hi + 1; t-- > p.observed;) {
        const long double term = detail::log_choose_ld(p.successes, t)
            + detail::log_choose_ld(failures, p.draws - t) - log_total;
        acc = log_add(acc, static_cast<double>(term));
    }
    return LogProb::from_log(acc);
}

/// n_j times the log of the exponential tail bound on H(n_ij + 1), written in
/// terms of p_check = p_ij + 1/n_j:
///
///   n_j [ p_check ln(p_i / p_check) + (1 - p_check) ln((1 - p_i) / (1 - p_check)) ]
///
/// Requires 0 < p_i <= p_check < 1.
inline double chvatal_log_bound(double p_i, double p_check, std::uint64_t n_j)
{
    if (!(p_i > 0.0 && p_i <= p_check && p_check < 1.0))
        throw Error(Errc::bound_inapplicable, "tail bound needs 0 < p_i <= p_check < 1");
    if (p_check == p_i)
        return 0.0;
    const double inside = p_check * std::log(p_i / p_check)
        + (1.0 - p_check) * std::log((1.0 - p_i) / (1.0 - p_check));
    return static_cast<double>(n_j) * inside;
}

inline double chvatal_log_bound(const CellStats& s)
{
    return chvatal_log_bound(s.p_i, s.p_check, s.n_j);
}

} // namespace fishtf
