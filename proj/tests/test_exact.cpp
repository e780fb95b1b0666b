#include "oracles.hpp"
#include "urnlab/exact.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace urnlab;

namespace {

std::vector<UrnSpec> random_tenable_urns(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::int64_t> d(1, 6);
    std::vector<UrnSpec> out;
    while (out.size() < count) {
        const std::int64_t a = d(gen), b = d(gen), s = d(gen);
        const UrnSpec u{a, b, s, a * d(gen), b * (d(gen) - 1)};
        if (is_tenable(u))
            out.push_back(u);
    }
    return out;
}

} // namespace

TEST(Exact, StepExamples)
{
    const UrnSpec u = urns::t23();
    auto hp = initial_histories(u);
    hp = step(u, hp);
    ASSERT_EQ(hp.coeffs.size(), 1u);
    EXPECT_EQ(hp.coeffs.at(0), 2);
    hp = histories(u, 2);
    EXPECT_EQ(hp.coeffs.at(4), 6);
    hp = step(u, hp);
    ASSERT_EQ(hp.coeffs.size(), 1u);
    EXPECT_EQ(hp.coeffs.at(2), 24);
    hp = step(u, hp);
    EXPECT_EQ(hp.coeffs.at(0), 48);
    EXPECT_EQ(hp.coeffs.at(6), 72);
}

TEST(Exact, DistributionExamples)
{
    const UrnSpec u = urns::t23();
    const auto d0 = exact_distribution(u, 0);
    ASSERT_EQ(d0.probs.size(), 1u);
    EXPECT_EQ(d0.probability(2), 1);
    const auto d4 = exact_distribution(u, 4);
    EXPECT_EQ(d4.probability(0), Rational(2, 5));
    EXPECT_EQ(d4.probability(6), Rational(3, 5));
    const auto d5 = exact_distribution(u, 5);
    ASSERT_EQ(d5.probs.size(), 1u);
    EXPECT_EQ(d5.probability(4), 1);
}

TEST(Exact, FactorialMomentExamples)
{
    const UrnSpec u = urns::t23();
    EXPECT_EQ(exact_factorial_moment(u, 5, 1), 4);
    EXPECT_EQ(exact_factorial_moment(u, 4, 1), Rational(18, 5));
    for (const auto& v : random_tenable_urns(5, 3))
        EXPECT_EQ(exact_factorial_moment(v, 7, 0), 1);
}

TEST(Exact, PgfExamples)
{
    const UrnSpec u = urns::t23();
    const auto p = pgf_polynomial(u, 4);
    EXPECT_EQ(p.degree(), 6);
    EXPECT_EQ(p.coeff(0), Rational(2, 5));
    EXPECT_EQ(p.coeff(6), Rational(3, 5));
    EXPECT_EQ(p(Rational(1)), 1);
    const auto p0 = pgf_polynomial(u, 0);
    EXPECT_EQ(p0, Polynomial::monomial(1, 2));
    EXPECT_EQ(pgf_polynomial(u, 7)(Rational(0)), exact_distribution(u, 7).probability(0));
}

TEST(Exact, MatchesBruteForceEnumeration)
{
    for (const auto& v : random_tenable_urns(5, 11)) {
        const UrnSpec u = v.with_initial(v.a, v.b);
        for (std::int64_t n = 0; n <= 4; ++n) {
            const auto hp = histories(u, n);
            const auto ref = oracle::enumerate_histories(u, n);
            EXPECT_EQ(hp.coeffs, ref) << u << " n=" << n;
        }
    }
}

TEST(Exact, PdeRecurrenceOnRandomUrns)
{
    for (const auto& u : random_tenable_urns(5, 29))
        EXPECT_EQ(oracle::pde_first_failure(u, 30), -1) << u;
}

TEST(Exact, ProbabilitiesSumToOne)
{
    for (const auto& u : random_tenable_urns(4, 5)) {
        auto hp = initial_histories(u);
        for (std::int64_t n = 0; n <= 40; ++n) {
            Rational total = 0;
            for (const auto& [x, p] : normalize(u, hp).probs)
                total += p;
            EXPECT_EQ(total, 1) << u << " n=" << n;
            hp = step(u, hp);
        }
    }
}

TEST(Exact, SupportPeriodicityOfZero)
{
    const UrnSpec u = urns::t23();
    for (std::int64_t n = 0; n <= 60; ++n) {
        const bool positive = exact_distribution(u, n).probability(0) > 0;
        EXPECT_EQ(positive, n % 3 == 1) << n;
    }
}

TEST(Exact, MeanDriftApproachesSlope)
{
    const UrnSpec u = urns::t23();
    const double slope = 4.0 / 7.0;
    double prev = 1e9;
    for (std::int64_t n : {50, 100, 200}) {
        const auto [m, v] = exact_mean_variance(exact_distribution(u, n));
        const double gap = std::abs(m.convert_to<double>() / static_cast<double>(n) - slope);
        EXPECT_LT(gap, prev) << n;
        prev = gap;
    }
}

TEST(Exact, FloatDistributionTracksExact)
{
    for (const auto& u : random_tenable_urns(3, 41)) {
        const auto e = exact_distribution(u, 40);
        const auto f = float_distribution(u, 40);
        for (const auto& [x, p] : e.probs)
            EXPECT_NEAR(f.probability(x), p.convert_to<double>(), 1e-13) << u << " x=" << x;
        const auto [m, v] = exact_mean_variance(e);
        EXPECT_NEAR(f.mean_variance().first, m.convert_to<double>(), 1e-9);
    }
}

TEST(Exact, CsvAndJsonExport)
{
    std::ostringstream os;
    write_distribution_csv(os, exact_distribution(urns::t23(), 4));
    EXPECT_EQ(os.str(), "x,numerator,denominator,float\n0,2,5,0.4\n6,3,5,0.6\n");
    const auto j = to_json_value(exact_distribution(urns::t23(), 4));
    EXPECT_EQ(j["probs"][1]["p"], "3/5");
}

TEST(Exact, NegativeTimeRejected)
{
    EXPECT_THROW(exact_distribution(urns::t23(), -1), UrnError);
}
