#pragma once

// Exact hypergeometric probabilities over arbitrary-precision integers.
//
// This is the reference the log-space kernels are checked against. It shares
// no code with numerics.hpp: binomial coefficients are built as exact integer
// products and tails are exact rational sums.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "fishtf/error.hpp"
#include "fishtf/numerics.hpp"

namespace fishtf::oracle {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Real = boost::multiprecision::cpp_bin_float_50;

inline constexpr std::uint64_t max_population = 200;

inline Integer binomial(std::uint64_t a, std::uint64_t b)
{
    if (b > a)
        return 0;
    if (b > a - b)
        b = a - b;
    Integer r = 1;
    for (std::uint64_t k = 1; k <= b; ++k) {
        r *= a - b + k;
        r /= k; // exact: r is C(a - b + k, k) here
    }
    return r;
}

/// Exact upper tails H(k) for every k in [0, min(K, s) + 1], indexed by k.
inline std::vector<Rational> exact_tails(std::uint64_t successes, std::uint64_t draws,
                                         std::uint64_t population)
{
    if (population > max_population)
        throw Error(Errc::oracle_domain_exceeded,
                    "exact oracle limited to population <= " + std::to_string(max_population));
    if (successes > population || draws > population)
        throw Error(Errc::invalid_params, "oracle needs successes <= population and draws <= population");

    const std::uint64_t top = std::min(successes, draws);
    const Integer total = binomial(population, draws);
    std::vector<Rational> tails(top + 2);
    Integer acc = 0;
    tails[top + 1] = 0;
    for (std::uint64_t t = top + 1; t-- > 0;) {
        acc += binomial(successes, t) * binomial(population - successes, draws - t);
        tails[t] = Rational(acc, total);
    }
    return tails;
}

/// Exact H(k; K, s, N) for N <= 200.
inline Rational hypergeom_tail_oracle(const HypergeomParams& p)
{
    const auto tails = exact_tails(p.successes, p.draws, p.population);
    if (p.observed >= tails.size())
        return 0;
    return tails[p.observed];
}

inline Rational hypergeom_pmf_oracle(const HypergeomParams& p)
{
    if (p.population > max_population)
        throw Error(Errc::oracle_domain_exceeded,
                    "exact oracle limited to population <= " + std::to_string(max_population));
    p.validate();
    if (p.observed > p.draws)
        return 0;
    return Rational(binomial(p.successes, p.observed)
                        * binomial(p.population - p.successes, p.draws - p.observed),
                    binomial(p.population, p.draws));
}

/// Exact b(k; s, prob) for a rational success probability.
inline Rational binom_pmf_oracle(std::uint64_t k, std::uint64_t s, const Rational& prob)
{
    if (k > s)
        return 0;
    const Integer a = numerator(prob);
    const Integer b = denominator(prob);
    const unsigned hits = static_cast<unsigned>(k);
    const unsigned misses = static_cast<unsigned>(s - k);
    return Rational(binomial(s, k) * pow(a, hits) * pow(Integer(b - a), misses),
                    pow(b, static_cast<unsigned>(s)));
}

/// ln of an exact probability, carried to 50 digits before narrowing.
inline double log_of(const Rational& r)
{
    if (r == 0)
        return -std::numeric_limits<double>::infinity();
    const Real num(numerator(r));
    const Real den(denominator(r));
    return static_cast<double>(log(num) - log(den));
}

inline double to_double(const Rational& r)
{
    return static_cast<double>(Real(numerator(r)) / Real(denominator(r)));
}

} // namespace fishtf::oracle
