#include "urnlab/analytic.hpp"
#include "urnlab/elliptic.hpp"
#include "urnlab/urn_series.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace urnlab;

namespace {

using PS = PowerSeries<Rational>;

const std::vector<UrnSpec>& sample_urns()
{
    static const std::vector<UrnSpec> urns{
        urns::t23(), urns::pentagonal(), {1, 1, 1, 1, 0}, {1, 2, 1, 1, 0}, {1, 1, 2, 2, 0},
        {1, 3, 2, 2, 0}, {1, 2, 3, 3, 0}, {1, 1, 4, 1, 0}, {2, 3, 1, 4, 3}, {1, 1, 1, 2, 1},
    };
    return urns;
}

/// psi(I(u)) as a power series in y = u^a, by integer powers only.
PS psi_of_i(const UrnSpec& u, std::size_t terms, std::size_t order)
{
    const auto dc = validate(u);
    const std::size_t q = static_cast<std::size_t>(dc.balance_class);
    const auto i = i_series(u, terms);
    const auto psi = psi_series_at_zero(u, terms);
    PS iy(order);
    for (std::size_t j = 0; j < i.order() && 1 + j * q < order; ++j)
        iy[1 + j * q] = i.coeff(j);
    const auto m = static_cast<std::int64_t>(u.a0 / u.a);
    PS out(order);
    for (std::size_t k = 0; k < psi.order(); ++k) {
        const std::int64_t e = m + static_cast<std::int64_t>(k * q);
        if (static_cast<std::size_t>(e) >= order)
            break;
        out = out + iy.pow_int(e) * psi.coeff(k);
    }
    return out;
}

PS j_in_y(const UrnSpec& u, std::size_t order)
{
    const auto dc = validate(u);
    const auto j = j_series(u, order);
    PS out(order);
    const std::size_t m = static_cast<std::size_t>(u.a0 / u.a), q = static_cast<std::size_t>(dc.balance_class);
    for (std::size_t k = 0; m + k * q < order; ++k)
        out[m + k * q] = j.coeff(k);
    return out;
}

} // namespace

TEST(PowerSeries, InverseExpLogIdentities)
{
    const std::size_t n = 12;
    PS f(n);
    for (std::size_t k = 0; k < n; ++k)
        f[k] = Rational(static_cast<long>(k * k + 1), static_cast<long>(k + 2));
    f[0] = 1;
    const auto one = PS::constant(1, n);
    EXPECT_EQ((f * f.inverse()).coefficients(), one.coefficients());
    EXPECT_EQ(f.log().exp().coefficients(), f.coefficients());
    EXPECT_EQ(f.pow(Rational(1, 3)).pow_int(3).coefficients(), f.coefficients());
    EXPECT_EQ(f.derivative().integral().coeff(5), f.coeff(5));
}

TEST(PowerSeries, ReversionRoundTrip)
{
    const std::size_t n = 15;
    PS g = PS::variable(n);
    g[2] = Rational(3, 7);
    g[5] = Rational(-2, 5);
    const auto r = g.reverse();
    EXPECT_EQ(g.compose(r).coefficients(), PS::variable(n).coefficients());
    EXPECT_EQ(r.compose(g).coefficients(), PS::variable(n).coefficients());
    PS bad(n);
    bad[2] = 1;
    EXPECT_THROW(bad.reverse(), UrnError);
}

TEST(ISeries, Examples)
{
    const auto p = i_series(urns::pentagonal(), 4);
    EXPECT_EQ(p.coeff_at(1), 1);
    EXPECT_EQ(p.coeff_at(6), Rational(1, 15));
    const auto t = i_series(urns::t23(), 4);
    EXPECT_EQ(t.coeff_at(2), Rational(1, 2));
    EXPECT_EQ(t.coeff_at(8), Rational(5, 48));
    const auto c = i_series({1, 1, 1, 1, 0}, 4);
    EXPECT_EQ(c.coeff_at(1), 1);
    EXPECT_EQ(c.coeff_at(4), Rational(1, 6));
    EXPECT_EQ(c.coeff_at(3), 0);
}

TEST(PsiSeries, Examples)
{
    const auto p = psi_series_at_zero(urns::pentagonal(), 4);
    EXPECT_EQ(p.coeff_at(1), 1);
    EXPECT_EQ(p.coeff_at(6), Rational(2, 15));
    const auto t = psi_series_at_zero(urns::t23(), 4);
    EXPECT_EQ(t.coeff_at(1), 2);
    EXPECT_EQ(t.coeff_at(4), 2);
    EXPECT_EQ(t.truncated(2).to_string(), "2*z + 2*z^4");
    for (const auto& u : sample_urns()) {
        const auto psi = psi_series_at_zero(u, 3);
        EXPECT_EQ(psi.offset, Rational(u.a0, u.a));
        EXPECT_EQ(psi.coeff(0), pow_int(Rational(u.a), u.a0 / u.a));
    }
}

TEST(PsiSeries, RoundTripWithAbelianIntegral)
{
    for (const auto& u : sample_urns()) {
        const std::size_t terms = 10;
        const auto q = static_cast<std::size_t>(validate(u).balance_class);
        const std::size_t order = static_cast<std::size_t>(u.a0 / u.a) + q * (terms - 1) + 1;
        EXPECT_EQ(psi_of_i(u, terms, order).coefficients(), j_in_y(u, order).coefficients()) << u;
    }
}

TEST(PsiSeries, ExponentsFollowTheBalanceClass)
{
    for (const auto& u : sample_urns()) {
        const auto dc = validate(u);
        const auto psi = psi_series_at_zero(u, 8);
        EXPECT_EQ(psi.step, Rational(dc.balance_class));
        for (std::size_t k = 0; k < psi.order(); ++k) {
            const Rational e = psi.exponent(k) - Rational(u.a0, u.a);
            EXPECT_TRUE(is_integer(e / Rational(dc.balance_class)));
        }
    }
}

TEST(SingularExpansion, T23MatchesLaurentCoefficients)
{
    const auto se = singular_expansion(urns::t23(), 6);
    EXPECT_EQ(se.prefactor_exponent, -2);
    EXPECT_EQ(se.puiseux_step, 6);
    EXPECT_EQ(se.a[0], 1);
    EXPECT_EQ(se.a[1], Rational(-1, 7));
    EXPECT_EQ(se.a[2], Rational(1, 637));
    const auto c = laurent_coefficients_exact(0, -4, 8);
    EXPECT_EQ(se.a[1], c[3]);
    EXPECT_EQ(se.a[2], c[6]);
}

TEST(SingularExpansion, LeadingCoefficientIsOne)
{
    for (const auto& u : sample_urns()) {
        const auto se = singular_expansion(u, 5);
        EXPECT_EQ(se.a[0], 1) << u;
        EXPECT_EQ(se.prefactor_exponent, Rational(-(u.a0 + u.b0), u.s));
    }
}

// psi(I(lambda)) = J(lambda) near lambda = 1, with rho - I(lambda) = K(lambda) delta(lambda)^s,
// compared against W^{-t0/h} (1 + a_1 W + a_2 W^2).
TEST(SingularExpansion, AgreesWithQuadratureNearTheSingularity)
{
    for (const auto& u : sample_urns()) {
        const auto dc = validate(u);
        const auto se = singular_expansion(u, 4);
        const double a1 = se.a[1].convert_to<double>(), a2 = se.a[2].convert_to<double>();
        const double h = static_cast<double>(dc.h), s = static_cast<double>(u.s);
        for (double eps : {1e-3, 1e-4}) {
            const double lam = 1.0 - eps;
            const double d = delta_real<double>(dc.h, lam);
            const double gap = K<double>(u, lam) * std::pow(d, s);
            const double w = std::pow(s * gap, h / s);
            const double psi = std::pow(lam, static_cast<double>(u.a0)) / std::pow(d, static_cast<double>(dc.t0));
            const double approx = std::pow(w, -static_cast<double>(dc.t0) / h) * (1 + a1 * w + a2 * w * w);
            EXPECT_LT(std::abs(psi / approx - 1), 40 * w * w * w) << u << " eps=" << eps;
        }
    }
}

TEST(KSeries, T23Coefficients)
{
    const auto k = k_series_at_one(urns::t23(), 5);
    const std::vector<Rational> expected{1, Rational(-4, 7), Rational(10, 91), Rational(300, 1729), Rational(-1689, 8645)};
    EXPECT_EQ(k.coeffs, expected);
}

TEST(KSeries, ConstantAndSlope)
{
    for (const auto& u : sample_urns()) {
        const auto k = k_series_at_one(u, 3);
        const auto dc = validate(u);
        EXPECT_EQ(k.coeff(0), Rational(1, u.s));
        EXPECT_EQ(k.coeff(1), Rational(-(u.s + u.b), u.s + dc.h)) << u;
        // central difference of the quadrature K, one-sided at 1
        const double step = 1e-4;
        const double d = (3 * K<double>(u, 1.0) - 4 * K<double>(u, 1 - step) + K<double>(u, 1 - 2 * step)) / (2 * step);
        EXPECT_NEAR(d, k.coeff(1).convert_to<double>(), 1e-6) << u;
    }
}

TEST(KSeries, MatchesQuadratureInsideTheDisc)
{
    for (const auto& u : sample_urns()) {
        const auto k = k_series_at_one(u, 60);
        const double x = -0.05;
        EXPECT_NEAR(k(x), K<double>(u, 1 + x), 1e-10) << u;
    }
}

TEST(Factorization, ExactProductIdentity)
{
    const UrnSpec base = urns::t23();
    for (const auto& [a0, b0] : std::vector<std::pair<std::int64_t, std::int64_t>>{{2, 0}, {2, 3}, {4, 3}}) {
        const UrnSpec u = base.with_initial(a0, b0);
        const auto [p1, p2] = factorize_psi(u, 30);
        const auto direct = psi_series_at_zero(u, 30);
        const auto product = recombine_psi(u, p1, p2);
        EXPECT_EQ(direct, product) << u;
    }
    const UrnSpec c{1, 1, 1, 2, 1};
    const auto [p1, p2] = factorize_psi(c, 20);
    EXPECT_EQ(psi_series_at_zero(c, 20), pow(p1, 2) * p2);
}

TEST(FormalSeries, JsonExport)
{
    const auto t = psi_series_at_zero(urns::t23(), 2);
    const auto j = to_json_value(t);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[1], nlohmann::json::array({"4", "1", "2", "1"}));
}
