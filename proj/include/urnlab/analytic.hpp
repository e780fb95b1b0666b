#pragma once

// Numeric side of the Abelian integral I(u) = int_0^u t^{a-1} (1-t^h)^{-(a+b)/h} dt,
// its value rho = I(1), the function K, and the kite / fundamental polygon.

#include "urnlab/numeric.hpp"
#include "urnlab/quadrature.hpp"
#include "urnlab/urn.hpp"

#include <cmath>
#include <complex>
#include <ostream>
#include <string>
#include <vector>

namespace urnlab {

using Complex = std::complex<double>;

/// (1 - u^h)^{1/h}, principal branch.
inline Complex delta(std::int64_t h, Complex u)
{
    const Complex w = 1.0 - std::pow(u, static_cast<int>(h));
    if (w == 0.0)
        return 0.0;
    return std::pow(w, 1.0 / static_cast<double>(h));
}

template <typename R>
R delta_real(std::int64_t h, const R& u)
{
    using std::pow;
    return pow(1 - pow(u, static_cast<int>(h)), R(1) / R(h));
}

namespace detail {

template <typename R>
R ipow(R x, std::int64_t e)
{
    R r = 1;
    while (e > 0) {
        if (e & 1)
            r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

/// sum_{k<h} (1-x)^k = (1 - (1-x)^h) / x, evaluated without cancellation.
template <typename R>
R geometric_sum(std::int64_t h, const R& x)
{
    R acc = 0, p = 1;
    const R y = 1 - x;
    for (std::int64_t k = 0; k < h; ++k) {
        acc += p;
        p *= y;
    }
    return acc;
}

/// Integrand of I on the plain part of [0, 1).
template <typename R>
R abelian_integrand(const UrnSpec& u, std::int64_t h, const R& t)
{
    using std::pow;
    return ipow(t, u.a - 1) * pow(1 - ipow(t, h), -R(u.a + u.b) / R(h));
}

/// Integrand after 1 - t = y^h: h y^{s-1} (1-y^h)^{a-1} D(y^h)^{-(a+b)/h}.
template <typename R>
R uniformized_integrand(const UrnSpec& u, std::int64_t h, const R& y)
{
    using std::pow;
    const R x = ipow(y, h);
    return R(h) * ipow(y, u.s - 1) * ipow(1 - x, u.a - 1) * pow(geometric_sum(h, x), -R(u.a + u.b) / R(h));
}

template <typename R>
R half_point_y(std::int64_t h)
{
    using std::pow;
    return pow(R(0.5), R(1) / R(h));
}

} // namespace detail

/// I(u) for real u in [0, 1] by adaptive Gauss-Legendre, split at 1/2 with
/// the substitution 1 - t = y^h on the upper half.
template <typename R = double>
R abelian_I(const UrnSpec& u, const R& x, R tol = default_tolerance<R>())
{
    using std::pow;
    const auto dc = validate(u);
    if (x < 0 || x > 1)
        fail(ErrorKind::OutOfRange, "abelian_I needs 0 <= u <= 1");
    const R half = R(0.5);
    auto f = [&](const R& t) { return detail::abelian_integrand(u, dc.h, t); };
    if (x <= half)
        return x == 0 ? R(0) : integrate<R>(f, R(0), x, tol).value;
    auto g = [&](const R& y) { return detail::uniformized_integrand(u, dc.h, y); };
    const R y_lo = pow(1 - x, R(1) / R(dc.h));
    return integrate<R>(f, R(0), half, tol / 2).value + integrate<R>(g, y_lo, detail::half_point_y<R>(dc.h), tol / 2).value;
}

/// rho by quadrature, I(1).
template <typename R = double>
R rho_quadrature(const UrnSpec& u, R tol = default_tolerance<R>())
{
    return abelian_I<R>(u, R(1), tol);
}

/// rho = (1/h) Gamma(a/h) Gamma(s/h) / Gamma((a+s)/h).
template <typename R = Real>
R rho(const UrnSpec& u)
{
    using std::tgamma;
    const auto dc = validate(u);
    const R h = R(dc.h);
    if constexpr (std::is_same_v<R, Real>)
        return boost::multiprecision::tgamma(R(u.a) / h) * boost::multiprecision::tgamma(R(u.s) / h) /
               boost::multiprecision::tgamma(R(u.a + u.s) / h) / h;
    else
        return tgamma(R(u.a) / h) * tgamma(R(u.s) / h) / tgamma(R(u.a + u.s) / h) / h;
}

/// (1/h) B(p/h, q/h).
template <typename R = Real>
R beta_over_h(std::int64_t p, std::int64_t q, std::int64_t h)
{
    using std::tgamma;
    const R hh = R(h);
    if constexpr (std::is_same_v<R, Real>)
        return boost::multiprecision::tgamma(R(p) / hh) * boost::multiprecision::tgamma(R(q) / hh) /
               boost::multiprecision::tgamma(R(p + q) / hh) / hh;
    else
        return tgamma(R(p) / hh) * tgamma(R(q) / hh) / tgamma(R(p + q) / hh) / hh;
}

struct AnalyticProfile {
    Real rho_beta;
    Real rho_quad;
    std::int64_t h, a, b, s, t0;
    Rational puiseux_exponent;  // h/s
    Rational singular_exponent; // -t0/s
};

inline AnalyticProfile analytic_profile(const UrnSpec& u)
{
    const auto dc = validate(u);
    AnalyticProfile p{rho<Real>(u), rho_quadrature<Real>(u), dc.h, u.a, u.b, u.s, dc.t0,
                      Rational(dc.h, u.s), Rational(-dc.t0, u.s)};
    if (p.rho_beta <= 0)
        fail(ErrorKind::NormalizationBreach, "rho must be positive");
    return p;
}

/// K(lambda) = delta(lambda)^{-s} int_lambda^1 t^{a-1} delta(t)^{-(a+b)} dt.
///
/// For lambda >= 1/2, with y = (1-lambda)^{1/h} and t = 1 - (y v)^h, the factor
/// y^s cancels between integral and prefactor, so K is evaluated without loss
/// up to and including lambda = 1.
template <typename R = double>
R K(const UrnSpec& u, const R& lambda, R tol = default_tolerance<R>())
{
    using std::pow;
    const auto dc = validate(u);
    if (lambda < 0 || lambda > 1)
        fail(ErrorKind::OutOfRange, "K needs 0 <= lambda <= 1");
    const R half = R(0.5);
    const R e = -R(u.a + u.b) / R(dc.h);
    if (lambda >= half) {
        const R y = pow(1 - lambda, R(1) / R(dc.h));
        auto f = [&](const R& v) {
            const R x = detail::ipow(y * v, dc.h);
            return R(dc.h) * detail::ipow(v, u.s - 1) * detail::ipow(1 - x, u.a - 1) * pow(detail::geometric_sum(dc.h, x), e);
        };
        const R num = integrate<R>(f, R(0), R(1), tol).value;
        return num / pow(detail::geometric_sum(dc.h, detail::ipow(y, dc.h)), R(u.s) / R(dc.h));
    }
    auto f = [&](const R& t) { return detail::abelian_integrand(u, dc.h, t); };
    auto g = [&](const R& y) { return detail::uniformized_integrand(u, dc.h, y); };
    R tail = integrate<R>(g, R(0), detail::half_point_y<R>(dc.h), tol / 2).value;
    if (lambda < half)
        tail += integrate<R>(f, lambda, half, tol / 2).value;
    return tail / pow(delta_real(dc.h, lambda), R(u.s));
}

/// K'(lambda) from (1 - u^h) K' = s u^{h-1} K - u^{a-1}; lambda < 1.
template <typename R = double>
R K_prime(const UrnSpec& u, const R& lambda, const R& k_value)
{
    const auto dc = validate(u);
    if (lambda >= 1)
        fail(ErrorKind::OutOfRange, "K_prime needs lambda < 1; use the series at 1");
    return (R(u.s) * detail::ipow(lambda, dc.h - 1) * k_value - detail::ipow(lambda, u.a - 1)) /
           (1 - detail::ipow(lambda, dc.h));
}

/// I(u) for complex u in the open unit disc along the segment [0, u]:
/// u^a int_0^1 r^{a-1} (1 - u^h r^h)^{-(a+b)/h} dr, principal powers.
inline Complex abelian_I_complex(const UrnSpec& u, Complex z, double tol = 1e-14)
{
    const auto dc = validate(u);
    if (std::abs(z) >= 1)
        fail(ErrorKind::OutOfRange, "complex I needs |u| < 1");
    const Complex zh = std::pow(z, static_cast<int>(dc.h));
    const double e = -static_cast<double>(u.a + u.b) / static_cast<double>(dc.h);
    auto f = [&](double r) {
        return detail::ipow(r, u.a - 1) * std::pow(1.0 - zh * detail::ipow(r, dc.h), e);
    };
    return std::pow(z, static_cast<int>(u.a)) * integrate<double>(f, 0.0, 1.0, tol).value;
}

/// K(u) = (rho - I(u)) / delta(u)^s for complex u in the unit disc, with
/// K(1) = 1/s.
inline Complex K_complex(const UrnSpec& u, Complex z, double rho_value)
{
    const auto dc = validate(u);
    if (z == 1.0)
        return 1.0 / static_cast<double>(u.s);
    if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= 1.0)
        return K<double>(u, z.real());
    return (rho_value - abelian_I_complex(u, z)) / std::pow(delta(dc.h, z), static_cast<int>(u.s));
}

// ---------------------------------------------------------------------------
// Kite geometry

struct KiteGeometry {
    Complex vertices[4]; // 0, I(1), I(+inf), I(e^{2 i pi / h})
    double angles[4];    // interior angles at the same vertices
    std::int64_t polygon_vertex_count;
};

namespace detail {

/// Continued argument of 1 - t^h along a path; fails on jumps above pi/4.
class BranchTracker {
public:
    explicit BranchTracker(double start) : arg_(start) {}

    double update(Complex w)
    {
        const double two_pi = 2.0 * 3.14159265358979323846;
        double raw = std::arg(w);
        double k = std::round((arg_ - raw) / two_pi);
        double next = raw + k * two_pi;
        if (std::abs(next - arg_) > 3.14159265358979323846 / 4)
            fail(ErrorKind::BranchTrackingFailure,
                 "argument of 1 - t^h jumped by " + std::to_string(next - arg_) + " between adjacent nodes");
        arg_ = next;
        return arg_;
    }
    double value() const { return arg_; }

private:
    double arg_;
};

} // namespace detail

/// Continues t^{a-1} (1 - t^h)^{-(a+b)/h} from the principal branch on (0, 1)
/// around t = 1 through the upper half plane and out along (1, +inf).
/// Returns I(+inf) for that continuation.
inline Complex abelian_I_infinity(const UrnSpec& u, unsigned panels = 64, unsigned points = 20)
{
    const auto dc = validate(u);
    const double pi = 3.14159265358979323846;
    const double e = -static_cast<double>(u.a + u.b) / static_cast<double>(dc.h);
    const int h = static_cast<int>(dc.h), am1 = static_cast<int>(u.a - 1);
    // Small enough that the semicircle around 1 encloses no other root of unity.
    const double r = std::min(0.5, std::sin(pi / static_cast<double>(dc.h)));
    const auto& g = gauss_legendre<double>(points);
    detail::BranchTracker tracker(0.0);
    Complex total = 0.0;

    auto integrand = [&](Complex t) {
        const Complex w = 1.0 - std::pow(t, h);
        const double arg = tracker.update(w);
        return std::pow(t, am1) * std::exp(e * Complex(std::log(std::abs(w)), arg));
    };
    // Composite fixed rule walked in path order (lo may exceed hi).
    auto run = [&](auto&& point, auto&& speed, double lo, double hi) {
        const double width = (hi - lo) / panels;
        for (unsigned p = 0; p < panels; ++p) {
            const double mid = lo + width * (p + 0.5);
            for (unsigned i = 0; i < points; ++i) {
                const double x = mid + width / 2 * g.nodes[i];
                total += integrand(point(x)) * speed(x) * (g.weights[i] * width / 2);
            }
        }
    };
    run([](double x) { return Complex(x, 0.0); }, [](double) { return Complex(1.0); }, 0.0, 1.0 - r);
    run([&](double th) { return 1.0 + r * std::exp(Complex(0.0, th)); },
        [&](double th) { return Complex(0.0, r) * std::exp(Complex(0.0, th)); }, pi, 0.0);
    run([](double v) { return Complex(1.0 / v, 0.0); }, [](double v) { return Complex(-1.0 / (v * v)); },
        1.0 / (1.0 + r), 0.0);
    return total;
}

/// I(+inf) along the bisector ray of the first sector: e^{i pi a/h} (1/h) B(a/h, b/h).
inline Complex abelian_I_infinity_bisector(const UrnSpec& u)
{
    const auto dc = validate(u);
    const double pi = 3.14159265358979323846;
    return std::polar(beta_over_h<double>(u.a, u.b, dc.h), pi * static_cast<double>(u.a) / static_cast<double>(dc.h));
}

inline KiteGeometry kite(const UrnSpec& u)
{
    const auto dc = validate(u);
    const double pi = 3.14159265358979323846;
    const double h = static_cast<double>(dc.h);
    const double rho_v = rho_quadrature<double>(u);
    KiteGeometry k{};
    k.vertices[0] = 0.0;
    k.vertices[1] = rho_v;
    k.vertices[2] = abelian_I_infinity(u);
    k.vertices[3] = std::polar(rho_v, 2.0 * pi * static_cast<double>(u.a) / h);
    k.angles[0] = 2.0 * pi * static_cast<double>(u.a) / h;
    k.angles[1] = pi * static_cast<double>(u.s) / h;
    k.angles[2] = 2.0 * pi * static_cast<double>(u.b) / h;
    k.angles[3] = pi * static_cast<double>(u.s) / h;
    k.polygon_vertex_count = dc.balance_class;
    return k;
}

struct BoundaryPoint {
    Complex z;
    int segment; // kite index * 2 + edge (0: from I(1), 1: towards the rotated I(1))
};

/// Outer boundary of the fundamental polygon: for each of the h/a rotated
/// kites, the image of [1, +inf) followed by the image of the ray at angle
/// 2 pi/h traced back from infinity. samples points per edge.
inline std::vector<BoundaryPoint> polygon_boundary_points(const UrnSpec& u, unsigned samples)
{
    const auto dc = validate(u);
    if (samples < 8)
        fail(ErrorKind::InvalidArgument, "polygon_boundary_points needs samples >= 8");
    const double pi = 3.14159265358979323846;
    const double h = static_cast<double>(dc.h);
    const double rho_v = rho_quadrature<double>(u);
    const UrnSpec sw{u.b, u.a, u.s, u.b0 == 0 ? u.b : u.b0, 0};
    const double rho_b = rho_quadrature<double>(sw);
    const Complex phase = std::polar(1.0, pi * static_cast<double>(u.a + u.b) / h);
    const Complex turn = std::polar(1.0, 2.0 * pi * static_cast<double>(u.a) / h);

    // On (1, +inf): I(t) = rho + e^{i pi (a+b)/h} (rho_b - I_b(1/t)).
    std::vector<Complex> edge(samples);
    for (unsigned i = 0; i < samples; ++i) {
        const double v = 1.0 - static_cast<double>(i) / static_cast<double>(samples - 1);
        edge[i] = rho_v + phase * (rho_b - abelian_I<double>(sw, v));
    }
    std::vector<BoundaryPoint> out;
    Complex rot = 1.0;
    for (std::int64_t kite_index = 0; kite_index < dc.balance_class; ++kite_index) {
        for (unsigned i = 0; i < samples; ++i)
            out.push_back({rot * edge[i], static_cast<int>(2 * kite_index)});
        for (unsigned i = samples; i-- > 0;)
            out.push_back({rot * turn * std::conj(edge[i]), static_cast<int>(2 * kite_index + 1)});
        rot *= turn;
    }
    return out;
}

inline void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPoint>& pts)
{
    os << "re,im,segment\n";
    os.precision(12);
    for (const auto& p : pts)
        os << p.z.real() << "," << p.z.imag() << "," << p.segment << "\n";
}

} // namespace urnlab
