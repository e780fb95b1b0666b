#pragma once

// Exact series attached to an urn: the Abelian integral at 0, the inverse
// function psi at 0, its Puiseux expansion at the dominant singularity and
// the Taylor series of K at u = 1.

#include "urnlab/numeric.hpp"
#include "urnlab/series.hpp"
#include "urnlab/urn.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace urnlab {

inline constexpr std::size_t default_series_terms = 20;

namespace detail {

/// sum_j (alpha)_j / j! / (a + j h) x^j with alpha = (a+b)/h, so that
/// I(u) = u^a F(u^h).
inline PowerSeries<Rational> abelian_body(const UrnSpec& u, std::size_t terms)
{
    const auto dc = validate(u);
    const Rational alpha(u.a + u.b, dc.h);
    PowerSeries<Rational> f(terms);
    Rational rising = 1;
    for (std::size_t j = 0; j < terms; ++j) {
        const auto jj = static_cast<std::int64_t>(j);
        f[j] = rising / Rational(u.a + jj * dc.h);
        rising *= (alpha + jj) / Rational(jj + 1);
    }
    return f;
}

/// (1/h) sum_{k<h} (1-x)^k, i.e. (1 - (1-x)^h) / (h x).
inline PowerSeries<Rational> mean_geometric(std::int64_t h, std::size_t terms)
{
    PowerSeries<Rational> d(terms);
    for (std::int64_t k = 0; k < h; ++k)
        for (std::int64_t j = 0; j <= k && static_cast<std::size_t>(j) < terms; ++j)
            d[static_cast<std::size_t>(j)] += Rational(binomial(k, j)) * (j % 2 ? -1 : 1);
    return d * Rational(1, h);
}

inline PowerSeries<Rational> one_minus_x_pow(std::int64_t e, std::size_t terms)
{
    PowerSeries<Rational> p(terms);
    for (std::int64_t j = 0; j <= e && static_cast<std::size_t>(j) < terms; ++j)
        p[static_cast<std::size_t>(j)] = Rational(binomial(e, j)) * (j % 2 ? -1 : 1);
    return p;
}

} // namespace detail

/// I(u) = u^a/a + ... ; exponents a + j h.
inline FormalSeries i_series(const UrnSpec& u, std::size_t terms = default_series_terms)
{
    const auto dc = validate(u);
    return FormalSeries::from_body("u", u.a, dc.h, detail::abelian_body(u, terms));
}

/// J(u) = u^{a0} (1 - u^h)^{-t0/h}; exponents a0 + j h.
inline FormalSeries j_series(const UrnSpec& u, std::size_t terms = default_series_terms)
{
    const auto dc = validate(u);
    return FormalSeries::from_body("u", u.a0, dc.h,
                                   detail::one_minus_x_pow(1, terms).pow(Rational(-dc.t0, dc.h)));
}

/// psi at z = 0, with exponents a0/a + j h/a.
///
/// With y = u^a, q = h/a and I = y F(y^q), put V = zeta-reversion of
/// x F(x)^q in zeta = z^q. Then y = z F(V)^{-1} and
/// psi = z^{a0/a} F(V)^{-a0/a} (1 - V)^{-t0/h}.
inline FormalSeries psi_series_at_zero(const UrnSpec& u, std::size_t terms = default_series_terms)
{
    const auto dc = validate(u);
    const std::int64_t q = dc.balance_class;
    const std::int64_t m = u.a0 / u.a;
    const auto f = detail::abelian_body(u, terms);
    const auto x = PowerSeries<Rational>::variable(terms);
    const auto v = (x * f.pow_int(q)).reverse();
    const auto fv = f.compose(v);
    const auto body = fv.pow(Rational(-m)) * (PowerSeries<Rational>::constant(1, terms) - v).pow(Rational(-dc.t0, dc.h));
    if (body.coeff(0) != pow_int(Rational(u.a), m))
        fail(ErrorKind::ReversionFailure, "leading coefficient of psi is not a^(a0/a)");
    return FormalSeries::from_body("z", m, q, body);
}

/// psi_I and psi_II: psi for the initial conditions (a, 0) and (0, b).
inline std::pair<FormalSeries, FormalSeries> factorize_psi(const UrnSpec& u, std::size_t terms = default_series_terms)
{
    validate(u);
    return {psi_series_at_zero(u.with_initial(u.a, 0), terms), psi_series_at_zero(u.with_initial(0, u.b), terms)};
}

/// psi_I^{a0/a} psi_II^{b0/b}.
inline FormalSeries recombine_psi(const UrnSpec& u, const FormalSeries& psi_1, const FormalSeries& psi_2)
{
    return pow(psi_1, Rational(u.a0, u.a)) * pow(psi_2, Rational(u.b0, u.b));
}

/// psi(z) = W^{-t0/h} sum_k a_k W^k with W = (s(rho - z))^{h/s}.
struct SingularExpansion {
    Rational prefactor_exponent; // -t0/s
    Rational puiseux_step;       // h/s
    std::vector<Rational> a;

    FormalSeries as_series(const std::string& var = "W") const
    {
        return {var, 0, 1, a};
    }
};

/// Coefficients a_k, from the local uniformizer 1 - u = tau^h at u = 1.
///
/// With x = tau^h, D(x) = (1/h) sum_{k<h} (1-x)^k and
/// G = (1-x)^{a-1} D^{-(a+b)/h}, one has
///   s (rho - z) = h^{s/h} tau^s U(x),   U = sum_j g_j s/(s + j h) x^j,
///   psi         = h^{-t0/h} tau^{-t0} V(x),  V = (1-x)^{a0} D^{-t0/h},
/// so W = h x U^{h/s} and A = V U^{t0/s} as a series in W.
inline SingularExpansion singular_expansion(const UrnSpec& u, std::size_t terms = default_series_terms)
{
    const auto dc = validate(u);
    const auto d = detail::mean_geometric(dc.h, terms);
    const auto g = detail::one_minus_x_pow(u.a - 1, terms) * d.pow(Rational(-(u.a + u.b), dc.h));
    PowerSeries<Rational> big_u(terms);
    for (std::size_t j = 0; j < terms; ++j)
        big_u[j] = g[j] * Rational(u.s, u.s + static_cast<std::int64_t>(j) * dc.h);
    const auto big_v = detail::one_minus_x_pow(u.a0, terms) * d.pow(Rational(-dc.t0, dc.h));
    if (big_u.coeff(0) != 1 || big_v.coeff(0) != 1)
        fail(ErrorKind::NormalizationBreach, "uniformized series do not start at 1");

    // Exponent of the irrational constant h^{1/h} left over after dividing psi
    // by W^{-t0/h}: -t0 from psi, +t0 from the prefactor.
    const Rational leftover = Rational(-dc.t0) - Rational(u.s) * Rational(-dc.t0, u.s);
    if (leftover != 0)
        fail(ErrorKind::NormalizationBreach, "h^(1/h) does not cancel: exponent " + to_fraction_string(leftover));

    const auto x = PowerSeries<Rational>::variable(terms);
    auto big_u_pow = big_u.pow(Rational(dc.h, u.s));
    const auto w = x * big_u_pow * Rational(dc.h);
    const auto x_of_w = w.reverse();
    const auto amp = big_v * big_u.pow(Rational(dc.t0, u.s));
    const auto a = amp.compose(x_of_w);
    if (a.coeff(0) != 1)
        fail(ErrorKind::NormalizationBreach, "a_0 = " + to_fraction_string(a.coeff(0)) + ", expected 1");
    return {Rational(-dc.t0, u.s), Rational(dc.h, u.s), a.coefficients()};
}

/// Taylor coefficients of K at u = 1 in the variable x = u - 1, from
/// (1 - u^h) K' = s u^{h-1} K - u^{a-1} and K(1) = 1/s:
///   k_n (h n + s) = C(a-1, n) - sum_{j>=1} [C(h, j+1)(n-j) + s C(h-1, j)] k_{n-j}.
inline FormalSeries k_series_at_one(const UrnSpec& u, std::size_t terms = default_series_terms)
{
    const auto dc = validate(u);
    std::vector<Rational> k(terms);
    if (terms)
        k[0] = Rational(1, u.s);
    for (std::size_t n = 1; n < terms; ++n) {
        const auto nn = static_cast<std::int64_t>(n);
        Rational acc = Rational(binomial(u.a - 1, nn));
        for (std::int64_t j = 1; j <= nn; ++j)
            acc -= (Rational(binomial(dc.h, j + 1)) * (nn - j) + Rational(u.s) * Rational(binomial(dc.h - 1, j))) *
                   k[static_cast<std::size_t>(nn - j)];
        k[n] = acc / Rational(dc.h * nn + u.s);
    }
    return {"x", 0, 1, std::move(k)};
}

} // namespace urnlab
