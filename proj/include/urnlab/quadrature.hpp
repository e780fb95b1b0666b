#pragma once

#include "urnlab/numeric.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace urnlab {

/// n-point Gauss-Legendre rule on [-1, 1].
template <typename R>
struct GaussLegendre {
    std::vector<R> nodes;
    std::vector<R> weights;
};

namespace detail {

template <typename R>
R pi_value()
{
    return boost::math::constants::pi<R>();
}

template <typename R>
GaussLegendre<R> build_gauss_legendre(unsigned n)
{
    using std::abs;
    using std::cos;
    GaussLegendre<R> g;
    g.nodes.resize(n);
    g.weights.resize(n);
    const R pi = pi_value<R>();
    const R eps = std::numeric_limits<R>::epsilon() * 8;
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        R x = cos(pi * (R(i) + R(0.75)) / (R(n) + R(0.5)));
        R dp = 0;
        for (int it = 0; it < 100; ++it) {
            R p0 = 1, p1 = x;
            for (unsigned k = 2; k <= n; ++k) {
                R p2 = ((2 * R(k) - 1) * x * p1 - (R(k) - 1) * p0) / R(k);
                p0 = p1;
                p1 = p2;
            }
            dp = R(n) * (x * p1 - p0) / (x * x - 1);
            R dx = p1 / dp;
            x -= dx;
            if (abs(dx) <= eps * abs(x))
                break;
        }
        R p0 = 1, p1 = x;
        for (unsigned k = 2; k <= n; ++k) {
            R p2 = ((2 * R(k) - 1) * x * p1 - (R(k) - 1) * p0) / R(k);
            p0 = p1;
            p1 = p2;
        }
        dp = R(n) * (x * p1 - p0) / (x * x - 1);
        const R w = 2 / ((1 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    return g;
}

} // namespace detail

/// Cached rule; for Real the cache is keyed by the current precision.
template <typename R>
const GaussLegendre<R>& gauss_legendre(unsigned n)
{
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, GaussLegendre<R>> cache;
    unsigned prec = 0;
    if constexpr (std::is_same_v<R, Real>)
        prec = Real::default_precision();
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, prec);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, detail::build_gauss_legendre<R>(n)).first;
    return it->second;
}

template <typename V, typename R>
struct QuadResult {
    V value;
    R error;
    unsigned panels = 0;
};

/// One Gauss-Legendre panel over [lo, hi].
template <typename R, typename F>
auto gauss_panel(const F& f, const R& lo, const R& hi, const GaussLegendre<R>& g)
{
    using V = decltype(f(lo));
    const R half = (hi - lo) / 2, mid = (hi + lo) / 2;
    V acc = V(0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        acc += f(mid + half * g.nodes[i]) * g.weights[i];
    return acc * half;
}

template <typename R>
R default_tolerance()
{
    if constexpr (std::is_same_v<R, Real>)
        return boost::multiprecision::pow(Real(10), -static_cast<int>(Real::default_precision()) + 5);
    else
        return static_cast<R>(1e-14);
}

/// Adaptive bisection with an n-point rule: a panel is accepted once it
/// agrees with the sum over its two halves to within its share of tol.
/// Throws ToleranceNotMet if the depth budget is exhausted.
template <typename R, typename F>
auto integrate(const F& f, const R& lo, const R& hi, R tol = default_tolerance<R>(), unsigned points = 0,
               unsigned max_depth = 40)
{
    using std::abs;
    using V = decltype(f(lo));
    if (points == 0)
        points = std::is_same_v<R, Real> ? 48 : 20;
    const auto& g = gauss_legendre<R>(points);
    QuadResult<V, R> res{V(0), R(0), 0};
    struct Task {
        R lo, hi;
        V whole;
        unsigned depth;
    };
    std::vector<Task> stack;
    stack.push_back({lo, hi, gauss_panel(f, lo, hi, g), 0});
    const R width = abs(hi - lo);
    while (!stack.empty()) {
        Task t = std::move(stack.back());
        stack.pop_back();
        const R mid = (t.lo + t.hi) / 2;
        V left = gauss_panel(f, t.lo, mid, g);
        V right = gauss_panel(f, mid, t.hi, g);
        const R diff = R(abs(left + right - t.whole));
        const R share = width == 0 ? tol : tol * abs(t.hi - t.lo) / width;
        if (diff <= share || diff <= std::numeric_limits<R>::epsilon() * R(abs(left + right)) * 4) {
            res.value += left + right;
            res.error += diff;
            res.panels += 2;
            continue;
        }
        if (t.depth >= max_depth)
            fail(ErrorKind::ToleranceNotMet, "adaptive quadrature did not converge on a panel of width " +
                                                 std::to_string(static_cast<double>(abs(t.hi - t.lo))));
        stack.push_back({t.lo, mid, std::move(left), t.depth + 1});
        stack.push_back({mid, t.hi, std::move(right), t.depth + 1});
    }
    return res;
}

} // namespace urnlab
