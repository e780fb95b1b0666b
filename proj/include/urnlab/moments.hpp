#pragma once

#include "urnlab/exact.hpp"
#include "urnlab/numeric.hpp"
#include "urnlab/polynomial.hpp"
#include "urnlab/series.hpp"
#include "urnlab/urn.hpp"
#include "urnlab/urn_series.hpp"

#include <ostream>
#include <vector>

namespace urnlab {

struct AsymptoticMoments {
    Rational mean_slope;     // E(X_n) ~ mean_slope n
    Rational variance_slope; // V(X_n) ~ variance_slope n
};

inline AsymptoticMoments asymptotic_moments(const UrnSpec& u)
{
    const auto dc = validate(u);
    const Rational s(u.s), h(dc.h);
    return {s * (s + u.b) / (s + h),
            s * h * h * (s + u.a) * (s + u.b) / ((s + h) * (s + h) * (s + 2 * h))};
}

struct MomentPolynomial {
    std::int64_t r;
    Polynomial p; // factorial moment of order r as a polynomial in v = n + t0/s
    std::int64_t validity_threshold;
};

/// P_r(v) = r! [x^r] exp(v L(x)), L = -log(s K(1+x)), for r = 0..r_max.
inline std::vector<MomentPolynomial> moment_polynomials(const UrnSpec& u, std::int64_t r_max)
{
    if (r_max < 1)
        fail(ErrorKind::InvalidArgument, "r_max must be >= 1");
    const auto n_terms = static_cast<std::size_t>(r_max + 1);
    auto k = k_series_at_one(u, n_terms).body() * Rational(u.s);
    const auto l = -k.log();
    // exp(v L) = sum_m v^m L^m / m!
    std::vector<MomentPolynomial> out;
    std::vector<PowerSeries<Rational>> lpow{PowerSeries<Rational>::constant(1, n_terms)};
    for (std::int64_t m = 1; m <= r_max; ++m)
        lpow.push_back(lpow.back() * l);
    for (std::int64_t r = 0; r <= r_max; ++r) {
        std::vector<Rational> coeffs(static_cast<std::size_t>(r + 1));
        for (std::int64_t m = 0; m <= r; ++m)
            coeffs[static_cast<std::size_t>(m)] =
                Rational(factorial(r)) / Rational(factorial(m)) * lpow[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
        out.push_back({r, Polynomial(std::move(coeffs)), 6 * r - 1});
    }
    return out;
}

/// P_r for the urn (-2,3;4,-3) started from (2,0); exact for n >= 6r - 1.
inline std::vector<MomentPolynomial> t23_moment_polynomials(std::int64_t r_max)
{
    auto out = moment_polynomials(urns::t23(), r_max);
    out.erase(out.begin());
    return out;
}

/// V(X_n) for the same urn from P_1 and P_2 at v = n + 2; n >= 11.
inline Rational variance_exact_t23(std::int64_t n)
{
    if (n < 11)
        fail(ErrorKind::OutOfRange, "variance_exact_t23 needs n >= 11");
    const auto p = moment_polynomials(urns::t23(), 2);
    const Rational v(n + 2);
    const Rational p1 = p[1].p(v);
    return p[2].p(v) + p1 - p1 * p1;
}

/// Factorial moment of order r as a finite sum over the singular coefficients:
///
///   E[X^(r)] = r!/C(n + t0/s - 1, n) sum_{k<=r} a_k C(n - beta_k - 1, n)
///              [x^r] (1 - (1+x)^h)^k (s K(1+x))^{beta_k - n},
///
/// beta_k = (k h - t0)/s. Every coefficient is rational, so evaluation is exact.
class ClosedFormMoment {
public:
    ClosedFormMoment(const UrnSpec& u, std::int64_t r) : u_(u), r_(r)
    {
        const auto dc = validate(u);
        if (r < 0)
            fail(ErrorKind::InvalidArgument, "moment order must be >= 0");
        h_ = dc.h;
        t0_ = dc.t0;
        const auto terms = static_cast<std::size_t>(r + 1);
        a_ = singular_expansion(u, terms + 1).a;
        khat_ = k_series_at_one(u, terms).body() * Rational(u.s);
        log_khat_ = khat_.log();
        // (1 - (1+x)^h)^k for k = 0..r
        PowerSeries<Rational> base(terms);
        for (std::int64_t j = 1; j <= h_ && static_cast<std::size_t>(j) < terms; ++j)
            base[static_cast<std::size_t>(j)] = -Rational(binomial(h_, j));
        powers_.push_back(PowerSeries<Rational>::constant(1, terms));
        for (std::int64_t k = 1; k <= r; ++k)
            powers_.push_back(powers_.back() * base);
    }

    std::int64_t order() const { return r_; }
    const std::vector<Rational>& singular_coefficients() const { return a_; }

    Rational evaluate(std::int64_t n) const
    {
        if (n < 0)
            fail(ErrorKind::InvalidArgument, "time index must be >= 0");
        const Rational t0s(t0_, u_.s);
        Rational total = 0;
        for (std::int64_t k = 0; k <= r_; ++k) {
            const Rational beta = Rational(k * h_ - t0_, u_.s);
            const Rational bin = generalized_binomial_n(-beta - 1, n);
            if (bin == 0)
                continue;
            // (s K)^{beta - n} = exp((beta - n) log(s K)); K-hat(0) = 1.
            const auto kpow = (log_khat_ * (beta - n)).exp();
            const auto prod = powers_[static_cast<std::size_t>(k)] * kpow;
            total += a_[static_cast<std::size_t>(k)] * bin * prod[static_cast<std::size_t>(r_)];
        }
        return Rational(factorial(r_)) * total / generalized_binomial_n(t0s - 1, n);
    }

private:
    /// C(n + c, n) = prod_{j<n} (c + 1 + j) / (j + 1).
    static Rational generalized_binomial_n(const Rational& c, std::int64_t n)
    {
        Rational r = 1;
        for (std::int64_t j = 0; j < n; ++j)
            r *= (c + 1 + j) / Rational(j + 1);
        return r;
    }

    UrnSpec u_;
    std::int64_t r_, h_ = 0, t0_ = 0;
    std::vector<Rational> a_;
    PowerSeries<Rational> khat_, log_khat_;
    std::vector<PowerSeries<Rational>> powers_;
};

inline ClosedFormMoment closed_form_factorial_moment(const UrnSpec& u, std::int64_t r)
{
    return ClosedFormMoment(u, r);
}

/// Rows n, r, exact, closed form, difference (exact minus closed form).
inline void write_moment_csv(std::ostream& os, const UrnSpec& u, std::int64_t r_max, std::int64_t n_max)
{
    os << "n,r,exact,closed_form,difference\n";
    std::vector<ClosedFormMoment> forms;
    for (std::int64_t r = 1; r <= r_max; ++r)
        forms.emplace_back(u, r);
    for (std::int64_t n = 0; n <= n_max; ++n) {
        const auto d = exact_distribution(u, n);
        for (std::int64_t r = 1; r <= r_max; ++r) {
            const Rational ex = factorial_moment(d, r);
            const Rational cf = forms[static_cast<std::size_t>(r - 1)].evaluate(n);
            os << n << "," << r << "," << to_fraction_string(ex) << "," << to_fraction_string(cf) << ","
               << to_fraction_string(ex - cf) << "\n";
        }
    }
}

} // namespace urnlab
