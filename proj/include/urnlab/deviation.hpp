#pragma once

#include "urnlab/analytic.hpp"
#include "urnlab/moments.hpp"
#include "urnlab/urn.hpp"
#include "urnlab/urn_series.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <ostream>
#include <vector>

namespace urnlab {

struct RatePoint {
    double xi;
    double lambda0;
    double rate;
};

/// K and K' in double precision on [0, 1]: quadrature away from 1, the exact
/// Taylor series at 1 close to it (where the ODE form of K' cancels).
class KEvaluator {
public:
    explicit KEvaluator(const UrnSpec& u, std::size_t series_terms = 60) : u_(u)
    {
        const auto dc = validate(u);
        const double pi = 3.14159265358979323846;
        // Nearest other singularity of K is the next h-th root of unity.
        radius_ = 2.0 * std::sin(pi / static_cast<double>(dc.h));
        const auto k = k_series_at_one(u, series_terms);
        for (const auto& c : k.coeffs)
            coeffs_.push_back(c.convert_to<double>());
    }

    bool uses_series(double lambda) const { return 1.0 - lambda <= std::min(0.1, radius_ / 4); }

    double value(double lambda) const
    {
        if (uses_series(lambda)) {
            const double x = lambda - 1.0;
            double acc = 0;
            for (std::size_t k = coeffs_.size(); k-- > 0;)
                acc = acc * x + coeffs_[k];
            return acc;
        }
        return K<double>(u_, lambda);
    }

    double derivative(double lambda, double k_value) const
    {
        if (uses_series(lambda)) {
            const double x = lambda - 1.0;
            double acc = 0;
            for (std::size_t k = coeffs_.size(); k-- > 1;)
                acc = acc * x + static_cast<double>(k) * coeffs_[k];
            return acc;
        }
        return K_prime<double>(u_, lambda, k_value);
    }

    const UrnSpec& spec() const { return u_; }

private:
    UrnSpec u_;
    double radius_;
    std::vector<double> coeffs_;
};

namespace detail {

inline double log_tilted(const KEvaluator& k, double xi, double lambda)
{
    return std::log(static_cast<double>(k.spec().s) * k.value(lambda)) + xi * std::log(lambda);
}

} // namespace detail

/// Direct maximization of log(s lambda^xi K(lambda)) over (0, 1) by golden
/// section search.
inline RatePoint rate_function_golden(const KEvaluator& k, double xi)
{
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-15, hi = 1.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = detail::log_tilted(k, xi, x1), f2 = detail::log_tilted(k, xi, x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = detail::log_tilted(k, xi, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = detail::log_tilted(k, xi, x1);
        }
    }
    const double lam = (lo + hi) / 2;
    return {xi, lam, detail::log_tilted(k, xi, lam)};
}

/// R(xi) with lambda0 the root of lambda K'/K + xi on (0, 1), cross-checked
/// against golden-section maximization.
inline RatePoint rate_function(const KEvaluator& k, double xi)
{
    const double mean = asymptotic_moments(k.spec()).mean_slope.convert_to<double>();
    if (!(xi > 0.0 && xi < mean))
        fail(ErrorKind::OutOfRange, "xi must lie in (0, " + std::to_string(mean) + ")");
    auto g = [&](double lam) {
        const double kv = k.value(lam);
        return lam * k.derivative(lam, kv) / kv + xi;
    };
    double lo = 1e-300, hi = 1.0;
    const double glo = g(lo), ghi = xi - mean;
    if (!(glo > 0 && ghi < 0))
        fail(ErrorKind::RootNotBracketed, "lambda K'/K + xi does not change sign on (0, 1)");
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
    const double lam = (a + b) / 2;
    RatePoint p{xi, lam, detail::log_tilted(k, xi, lam)};
    const RatePoint gold = rate_function_golden(k, xi);
    if (std::abs(gold.rate - p.rate) > 1e-8)
        fail(ErrorKind::ToleranceNotMet, "root and golden-section rates disagree: " + std::to_string(p.rate) + " vs " +
                                             std::to_string(gold.rate));
    return p;
}

inline RatePoint rate_function(const UrnSpec& u, double xi)
{
    return rate_function(KEvaluator(u), xi);
}

/// grid points xi_i = mean_slope * i / (grid + 1), i = 1..grid.
inline std::vector<RatePoint> rate_curve(const UrnSpec& u, unsigned grid)
{
    if (grid < 1)
        fail(ErrorKind::InvalidArgument, "grid must be >= 1");
    const KEvaluator k(u);
    const double mean = asymptotic_moments(u).mean_slope.convert_to<double>();
    std::vector<RatePoint> out;
    for (unsigned i = 1; i <= grid; ++i)
        out.push_back(rate_function(k, mean * i / (grid + 1)));
    return out;
}

inline void write_rate_csv(std::ostream& os, const std::vector<RatePoint>& pts)
{
    os << "xi,lambda0,rate\n";
    os.precision(12);
    for (const auto& p : pts)
        os << p.xi << "," << p.lambda0 << "," << p.rate << "\n";
}

/// P(all black balls gone at time n) ~ (h/a) (s rho)^{-n - t0/s} on the
/// reachable residue class n = a0/a mod h/a; 0 elsewhere.
inline double extreme_deviation(const UrnSpec& u, std::int64_t n)
{
    const auto dc = validate(u);
    const std::int64_t q = dc.balance_class;
    if (((n - u.a0 / u.a) % q + q) % q != 0)
        return 0.0;
    const double r = rho<double>(u);
    return static_cast<double>(q) *
           std::pow(static_cast<double>(u.s) * r, -static_cast<double>(n) - static_cast<double>(dc.t0) / static_cast<double>(u.s));
}

/// -(1/n) log P(X_n <= xi n) from the double-precision law.
inline double empirical_rate(const FloatDistribution& d, double xi)
{
    const double p = d.cdf(xi * static_cast<double>(d.n));
    return -std::log(p) / static_cast<double>(d.n);
}

} // namespace urnlab
