#pragma once

#include "urnlab/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace urnlab {

/// A balanced 2x2 urn with subtraction, replacement matrix
///
///     ( -a    a+s )
///     ( b+s   -b  )
///
/// started from a0 black and b0 white balls. Rows are indexed by the colour
/// drawn, columns by the colour added (black first).
struct UrnSpec {
    std::int64_t a = 1;
    std::int64_t b = 1;
    std::int64_t s = 1;
    std::int64_t a0 = 1;
    std::int64_t b0 = 0;

    friend bool operator==(const UrnSpec&, const UrnSpec&) = default;

    /// Same matrix, colours exchanged (black <-> white).
    UrnSpec swapped() const { return {b, a, s, b0, a0}; }
    UrnSpec with_initial(std::int64_t na0, std::int64_t nb0) const { return {a, b, s, na0, nb0}; }
};

inline std::ostream& operator<<(std::ostream& os, const UrnSpec& u)
{
    return os << "(-" << u.a << "," << u.a + u.s << ";" << u.b + u.s << ",-" << u.b << ") a0=" << u.a0
              << " b0=" << u.b0;
}

struct DerivedConstants {
    std::int64_t t0;            // initial population a0 + b0
    std::int64_t h;             // a + b + s
    std::int64_t balance_class; // h / a, period of psi's exponents

    friend bool operator==(const DerivedConstants&, const DerivedConstants&) = default;
};

/// Checks positivity and the tenability divisibilities, returning the derived
/// constants of a valid urn.
inline DerivedConstants validate(const UrnSpec& u)
{
    if (u.a < 1 || u.b < 1 || u.s < 1)
        fail(ErrorKind::NonPositiveParameter, "a, b and s must be >= 1");
    if (u.a0 < 0 || u.b0 < 0)
        fail(ErrorKind::NonPositiveParameter, "a0 and b0 must be >= 0");
    if (u.a0 + u.b0 < 1)
        fail(ErrorKind::NonPositiveParameter, "empty urn: a0 + b0 must be >= 1");
    if (u.a0 % u.a != 0)
        fail(ErrorKind::TenabilityViolation, "a does not divide a0 (a=" + std::to_string(u.a) +
                                                 ", a0=" + std::to_string(u.a0) + ")");
    if (u.b0 % u.b != 0)
        fail(ErrorKind::TenabilityViolation, "b does not divide b0 (b=" + std::to_string(u.b) +
                                                 ", b0=" + std::to_string(u.b0) + ")");
    if ((u.b + u.s) % u.a != 0)
        fail(ErrorKind::TenabilityViolation, "a does not divide b+s (a=" + std::to_string(u.a) +
                                                 ", b+s=" + std::to_string(u.b + u.s) + ")");
    if ((u.a + u.s) % u.b != 0)
        fail(ErrorKind::TenabilityViolation, "b does not divide a+s (b=" + std::to_string(u.b) +
                                                 ", a+s=" + std::to_string(u.a + u.s) + ")");
    const std::int64_t h = u.a + u.b + u.s;
    return {u.a0 + u.b0, h, h / u.a};
}

inline bool is_tenable(const UrnSpec& u)
{
    try {
        validate(u);
        return true;
    } catch (const UrnError&) {
        return false;
    }
}

/// Population at time n.
inline std::int64_t population(const UrnSpec& u, std::int64_t n)
{
    return u.a0 + u.b0 + n * u.s;
}

/// Number of histories of length n: t0 (t0+s) ... (t0+(n-1)s).
inline BigInt history_count(const UrnSpec& u, std::int64_t n)
{
    BigInt r = 1;
    for (std::int64_t i = 0; i < n; ++i)
        r *= population(u, i);
    return r;
}

/// n! s^n C(n + t0/s - 1, n); only defined when s divides t0.
inline BigInt history_count_binomial_form(const UrnSpec& u, std::int64_t n)
{
    const std::int64_t t0 = u.a0 + u.b0;
    if (t0 % u.s != 0)
        fail(ErrorKind::InvalidArgument, "binomial form of the history count needs s | t0");
    return factorial(n) * boost::multiprecision::pow(BigInt(u.s), static_cast<unsigned>(n)) *
           binomial(n + t0 / u.s - 1, n);
}

inline std::int64_t matrix_gcd(const UrnSpec& u)
{
    return std::gcd(std::gcd(u.a, u.a + u.s), std::gcd(u.b + u.s, u.b));
}

namespace urns {
inline UrnSpec t23() { return {2, 3, 1, 2, 0}; }
inline UrnSpec pentagonal() { return {1, 1, 3, 1, 0}; }
} // namespace urns

inline void to_json(nlohmann::json& j, const UrnSpec& u)
{
    j = nlohmann::json{{"a", u.a}, {"b", u.b}, {"s", u.s}, {"a0", u.a0}, {"b0", u.b0}};
}

inline void from_json(const nlohmann::json& j, UrnSpec& u)
{
    for (const char* key : {"a", "b", "s", "a0", "b0"}) {
        if (!j.contains(key))
            fail(ErrorKind::InvalidArgument, std::string("urn spec is missing key \"") + key + "\"");
        if (!j.at(key).is_number_integer())
            fail(ErrorKind::InvalidArgument, std::string("urn spec key \"") + key + "\" must be an integer");
    }
    u.a = j.at("a").get<std::int64_t>();
    u.b = j.at("b").get<std::int64_t>();
    u.s = j.at("s").get<std::int64_t>();
    u.a0 = j.at("a0").get<std::int64_t>();
    u.b0 = j.at("b0").get<std::int64_t>();
}

} // namespace urnlab
