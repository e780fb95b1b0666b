#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace urnlab {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
/// Runtime-precision MPFR real. Precision is a global default; see PrecisionScope.
/// Expression templates are off so that generic code can deduce R from its arguments.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

enum class ErrorKind {
    NonPositiveParameter,
    TenabilityViolation,
    InternalTenabilityBreach,
    ReversionFailure,
    NormalizationBreach,
    ToleranceNotMet,
    BranchTrackingFailure,
    OutOfRange,
    RootNotBracketed,
    PoleAt,
    TailTooLarge,
    DegenerateDistribution,
    InvalidArgument,
};

inline std::string_view to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::TenabilityViolation: return "TenabilityViolation";
    case ErrorKind::InternalTenabilityBreach: return "InternalTenabilityBreach";
    case ErrorKind::ReversionFailure: return "ReversionFailure";
    case ErrorKind::NormalizationBreach: return "NormalizationBreach";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::BranchTrackingFailure: return "BranchTrackingFailure";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::RootNotBracketed: return "RootNotBracketed";
    case ErrorKind::PoleAt: return "PoleAt";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class UrnError : public std::runtime_error {
public:
    UrnError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw UrnError(kind, what);
}

// ---------------------------------------------------------------------------
// Exact arithmetic helpers

inline BigInt binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigInt factorial(std::int64_t n)
{
    BigInt r = 1;
    for (std::int64_t i = 2; i <= n; ++i)
        r *= i;
    return r;
}

/// Generalized binomial C(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!.
inline Rational binomial(const Rational& alpha, std::int64_t k)
{
    Rational r = 1;
    for (std::int64_t i = 0; i < k; ++i)
        r *= (alpha - i) / Rational(i + 1);
    return r;
}

/// Falling factorial x (x-1) ... (x-r+1).
inline Rational falling_factorial(const Rational& x, std::int64_t r)
{
    Rational p = 1;
    for (std::int64_t i = 0; i < r; ++i)
        p *= x - i;
    return p;
}

inline Rational pow_int(const Rational& x, std::int64_t e)
{
    if (e < 0)
        return Rational(1) / pow_int(x, -e);
    Rational r = 1, b = x;
    while (e) {
        if (e & 1)
            r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline bool is_integer(const Rational& q)
{
    return boost::multiprecision::denominator(q) == 1;
}

/// Exact q-th root of a nonnegative integer, if it exists.
inline std::optional<BigInt> exact_root(const BigInt& v, unsigned q)
{
    if (v < 0)
        return std::nullopt;
    if (v == 0 || v == 1 || q == 1)
        return v;
    BigInt lo = 0, hi = 1;
    while (boost::multiprecision::pow(hi, q) <= v)
        hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, q) <= v)
            lo = mid;
        else
            hi = mid;
    }
    if (boost::multiprecision::pow(lo, q) == v)
        return lo;
    return std::nullopt;
}

/// x^e for rational e, if the result is rational. Handles the common case
/// x = 1 and perfect powers.
inline std::optional<Rational> rational_power(const Rational& x, const Rational& e)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (x == 1)
        return Rational(1);
    BigInt en = numerator(e), ed = denominator(e);
    if (x == 0)
        return e > 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
    if (ed > 64)
        return std::nullopt;
    unsigned q = ed.convert_to<unsigned>();
    Rational base = x;
    if (base < 0) {
        if (q % 2 == 0)
            return std::nullopt;
        base = -base;
    }
    auto rn = exact_root(numerator(base), q);
    auto rd = exact_root(denominator(base), q);
    if (!rn || !rd)
        return std::nullopt;
    Rational root = Rational(*rn) / Rational(*rd);
    if (x < 0)
        root = -root;
    return pow_int(root, en.convert_to<std::int64_t>());
}

/// "p/q" or "p" for integers.
inline std::string to_fraction_string(const Rational& q)
{
    if (is_integer(q))
        return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational parse_fraction(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

// ---------------------------------------------------------------------------
// Precision control

inline constexpr unsigned default_precision_digits = 50;

/// Digits requested through URNLAB_PRECISION, or the default.
inline unsigned requested_precision_digits()
{
    if (const char* env = std::getenv("URNLAB_PRECISION")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 10 && v <= 2000)
            return static_cast<unsigned>(v);
    }
    return default_precision_digits;
}

/// Sets the process-wide MPFR default precision and restores it on exit.
/// Not safe to nest across threads that evaluate Real concurrently.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits) : saved_(Real::default_precision())
    {
        Real::default_precision(digits);
    }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;
    ~PrecisionScope() { Real::default_precision(saved_); }

private:
    unsigned saved_;
};

template <typename T>
T to_real(const Rational& q)
{
    if constexpr (std::is_same_v<T, Real>)
        return Real(q);
    else
        return static_cast<T>(q.convert_to<long double>());
}

} // namespace urnlab
