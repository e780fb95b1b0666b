#pragma once

// Exact law of the black-ball count by dynamic programming over history
// counts. Deliberately free of any closed form so that it can serve as the
// reference for every analytic result in the library.

#include "urnlab/numeric.hpp"
#include "urnlab/polynomial.hpp"
#include "urnlab/urn.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace urnlab {

/// h_n(u): number of length-n histories ending with x black balls, keyed by x.
/// Only reachable states are stored.
struct HistoryPolynomial {
    std::int64_t n = 0;
    std::map<std::int64_t, BigInt> coeffs;

    BigInt total() const
    {
        BigInt t = 0;
        for (const auto& [x, c] : coeffs)
            t += c;
        return t;
    }

    Polynomial to_polynomial() const
    {
        if (coeffs.empty())
            return {};
        std::vector<Rational> v(static_cast<std::size_t>(coeffs.rbegin()->first) + 1);
        for (const auto& [x, c] : coeffs)
            v[static_cast<std::size_t>(x)] = Rational(c);
        return Polynomial(std::move(v));
    }
};

struct ExactDistribution {
    std::int64_t n = 0;
    std::map<std::int64_t, Rational> probs;

    Rational probability(std::int64_t x) const
    {
        auto it = probs.find(x);
        return it == probs.end() ? Rational(0) : it->second;
    }
};

inline HistoryPolynomial initial_histories(const UrnSpec& u)
{
    validate(u);
    HistoryPolynomial hp;
    hp.coeffs[u.a0] = 1;
    return hp;
}

/// One application of the urn operator: every state x with weight c sends
/// x*c histories to x-a (black drawn) and (t_n-x)*c to x+b+s (white drawn).
inline HistoryPolynomial step(const UrnSpec& u, const HistoryPolynomial& hp)
{
    const std::int64_t t = population(u, hp.n);
    HistoryPolynomial next;
    next.n = hp.n + 1;
    for (const auto& [x, c] : hp.coeffs) {
        const std::int64_t w = t - x;
        if (x < 0 || w < 0)
            fail(ErrorKind::InternalTenabilityBreach, "state x=" + std::to_string(x) + " outside [0, t_n]");
        if (x > 0) {
            if (x < u.a)
                fail(ErrorKind::InternalTenabilityBreach,
                     "drawing black from x=" + std::to_string(x) + " would remove " + std::to_string(u.a));
            next.coeffs[x - u.a] += c * x;
        }
        if (w > 0) {
            if (w < u.b)
                fail(ErrorKind::InternalTenabilityBreach,
                     "drawing white from w=" + std::to_string(w) + " would remove " + std::to_string(u.b));
            next.coeffs[x + u.b + u.s] += c * w;
        }
    }
    return next;
}

inline HistoryPolynomial histories(const UrnSpec& u, std::int64_t n)
{
    HistoryPolynomial hp = initial_histories(u);
    for (std::int64_t i = 0; i < n; ++i)
        hp = step(u, hp);
    return hp;
}

inline ExactDistribution normalize(const UrnSpec& u, const HistoryPolynomial& hp)
{
    const BigInt total = history_count(u, hp.n);
    ExactDistribution d;
    d.n = hp.n;
    for (const auto& [x, c] : hp.coeffs)
        d.probs.emplace(x, Rational(c, total));
    return d;
}

inline ExactDistribution exact_distribution(const UrnSpec& u, std::int64_t n)
{
    if (n < 0)
        fail(ErrorKind::InvalidArgument, "time index must be >= 0");
    return normalize(u, histories(u, n));
}

/// E[X_n (X_n - 1) ... (X_n - r + 1)], exact.
inline Rational factorial_moment(const ExactDistribution& d, std::int64_t r)
{
    Rational m = 0;
    for (const auto& [x, p] : d.probs)
        m += falling_factorial(Rational(x), r) * p;
    return m;
}

inline Rational exact_factorial_moment(const UrnSpec& u, std::int64_t n, std::int64_t r)
{
    if (r < 0)
        fail(ErrorKind::InvalidArgument, "moment order must be >= 0");
    return factorial_moment(exact_distribution(u, n), r);
}

inline Polynomial pgf_polynomial(const ExactDistribution& d)
{
    if (d.probs.empty())
        return {};
    std::vector<Rational> v(static_cast<std::size_t>(d.probs.rbegin()->first) + 1);
    for (const auto& [x, p] : d.probs)
        v[static_cast<std::size_t>(x)] = p;
    return Polynomial(std::move(v));
}

inline Polynomial pgf_polynomial(const UrnSpec& u, std::int64_t n)
{
    return pgf_polynomial(exact_distribution(u, n));
}

/// Mean and variance of an exact law.
inline std::pair<Rational, Rational> exact_mean_variance(const ExactDistribution& d)
{
    Rational m1 = 0, m2 = 0;
    for (const auto& [x, p] : d.probs) {
        m1 += Rational(x) * p;
        m2 += Rational(x) * Rational(x) * p;
    }
    return {m1, m2 - m1 * m1};
}

inline void write_distribution_csv(std::ostream& os, const ExactDistribution& d)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    os << "x,numerator,denominator,float\n";
    const auto old = os.precision(12);
    for (const auto& [x, p] : d.probs)
        os << x << "," << numerator(p) << "," << denominator(p) << "," << p.convert_to<double>() << "\n";
    os.precision(old);
}

inline nlohmann::json to_json_value(const ExactDistribution& d)
{
    nlohmann::json probs = nlohmann::json::array();
    for (const auto& [x, p] : d.probs)
        probs.push_back({{"x", x}, {"p", to_fraction_string(p)}, {"float", p.convert_to<double>()}});
    return {{"n", d.n}, {"probs", probs}};
}

// ---------------------------------------------------------------------------
// Floating-point variant (approximate) for large n.

/// Law of X_n in double precision. probs[k] is P(X_n = k*a); the black count
/// is always a multiple of a.
struct FloatDistribution {
    std::int64_t n = 0;
    std::int64_t a = 1;
    std::vector<double> probs;

    double probability(std::int64_t x) const
    {
        if (x < 0 || x % a != 0)
            return 0.0;
        auto k = static_cast<std::size_t>(x / a);
        return k < probs.size() ? probs[k] : 0.0;
    }

    /// P(X_n <= x).
    double cdf(double x) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < probs.size() && static_cast<double>(k) * static_cast<double>(a) <= x; ++k)
            acc += probs[k];
        return acc;
    }

    std::pair<double, double> mean_variance() const
    {
        double m1 = 0, m2 = 0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            const double x = static_cast<double>(k) * static_cast<double>(a);
            m1 += x * probs[k];
            m2 += x * x * probs[k];
        }
        return {m1, m2 - m1 * m1};
    }
};

/// Same recurrence as step(), on probabilities, in double precision.
/// Approximate: probabilities below ~1e-308 underflow to zero.
inline FloatDistribution float_distribution(const UrnSpec& u, std::int64_t n)
{
    validate(u);
    FloatDistribution d;
    d.a = u.a;
    d.probs.assign(static_cast<std::size_t>(u.a0 / u.a) + 1, 0.0);
    d.probs.back() = 1.0;
    std::vector<double> next;
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(population(u, i));
        const std::int64_t max_x = population(u, i + 1);
        next.assign(static_cast<std::size_t>(max_x / u.a) + 1, 0.0);
        for (std::size_t k = 0; k < d.probs.size(); ++k) {
            const double p = d.probs[k];
            if (p == 0.0)
                continue;
            const std::int64_t x = static_cast<std::int64_t>(k) * u.a;
            const double xb = static_cast<double>(x);
            if (x > 0)
                next[k - 1] += p * xb / t;
            if (t - xb > 0)
                next[k + static_cast<std::size_t>((u.b + u.s) / u.a)] += p * (t - xb) / t;
        }
        d.probs.swap(next);
        d.n = i + 1;
    }
    return d;
}

} // namespace urnlab
