#pragma once

#include "urnlab/analytic.hpp"
#include "urnlab/numeric.hpp"
#include "urnlab/urn.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace urnlab {

// ---------------------------------------------------------------------------
// Lattices

struct Lattice {
    Complex gen1;
    Complex gen2;

    Lattice(Complex w1, Complex w2) : gen1(w1), gen2(w2)
    {
        if (std::abs((std::conj(w1) * w2).imag()) <= 1e-300)
            fail(ErrorKind::InvalidArgument, "lattice generators are linearly dependent over the reals");
    }

    Lattice scaled(Complex k) const { return {gen1 * k, gen2 * k}; }

    /// Lagrange-Gauss reduced basis: |w1| <= |w2| <= |w2 - m w1| for all m.
    Lattice reduced() const
    {
        Complex a = gen1, b = gen2;
        if (std::norm(a) > std::norm(b))
            std::swap(a, b);
        for (int it = 0; it < 1000; ++it) {
            const double m = std::round((std::conj(a) * b).real() / std::norm(a));
            b -= m * a;
            if (std::norm(b) >= std::norm(a))
                break;
            std::swap(a, b);
        }
        // Orient so that Im(b/a) > 0.
        if ((b / a).imag() < 0)
            b = -b;
        return {a, b};
    }

    /// Real coordinates (x, y) with z = x gen1 + y gen2.
    std::pair<double, double> coordinates(Complex z) const
    {
        const double det = gen1.real() * gen2.imag() - gen1.imag() * gen2.real();
        return {(z.real() * gen2.imag() - z.imag() * gen2.real()) / det,
                (gen1.real() * z.imag() - gen1.imag() * z.real()) / det};
    }

    /// Nearest lattice point; the basis should be reduced.
    Complex nearest(Complex z) const
    {
        auto [x, y] = coordinates(z);
        const double rx = std::round(x), ry = std::round(y);
        Complex best = rx * gen1 + ry * gen2;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) {
                const Complex w = (rx + i) * gen1 + (ry + j) * gen2;
                if (std::abs(z - w) < std::abs(z - best))
                    best = w;
            }
        return best;
    }

    double min_length() const
    {
        const Lattice r = reduced();
        return std::abs(r.gen1);
    }
};

/// Generated by e^{i pi/6} and e^{-i pi/6}.
inline Lattice hexagonal_lattice()
{
    const double pi = 3.14159265358979323846;
    return {std::polar(1.0, pi / 6), std::polar(1.0, -pi / 6)};
}

/// g2 = 60 sum' w^-4 and g3 = 140 sum' w^-6 from the Eisenstein q-series.
inline std::pair<Complex, Complex> lattice_invariants(const Lattice& lat)
{
    const double pi = 3.14159265358979323846;
    const Lattice r = lat.reduced();
    const Complex w1 = r.gen1;
    const Complex tau = r.gen2 / r.gen1;
    const Complex q = std::exp(Complex(0.0, 2.0 * pi) * tau);
    Complex e4 = 1.0, e6 = 1.0, qn = 1.0;
    for (int n = 1; n <= 60; ++n) {
        qn *= q;
        double s3 = 0, s5 = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) {
                s3 += std::pow(d, 3);
                s5 += std::pow(d, 5);
            }
        e4 += 240.0 * s3 * qn;
        e6 -= 504.0 * s5 * qn;
        if (std::abs(qn) * std::pow(n, 6) < 1e-20)
            break;
    }
    const double zeta4 = std::pow(pi, 4) / 90.0, zeta6 = std::pow(pi, 6) / 945.0;
    const Complex g4 = 2.0 * zeta4 * e4 / std::pow(w1, 4);
    const Complex g6 = 2.0 * zeta6 * e6 / std::pow(w1, 6);
    return {60.0 * g4, 140.0 * g6};
}

// ---------------------------------------------------------------------------
// Weierstrass p

/// wp(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}.
inline std::vector<Rational> laurent_coefficients_exact(const Rational& g2, const Rational& g3, std::size_t k_max)
{
    std::vector<Rational> c(k_max + 1);
    if (k_max >= 2)
        c[2] = g2 / 20;
    if (k_max >= 3)
        c[3] = g3 / 28;
    for (std::size_t k = 4; k <= k_max; ++k) {
        Rational acc = 0;
        for (std::size_t m = 2; m + 2 <= k; ++m)
            acc += c[m] * c[k - m];
        c[k] = Rational(3) * acc / Rational(static_cast<long>((2 * k + 1) * (k - 3)));
    }
    return c;
}

inline std::vector<Complex> laurent_coefficients(Complex g2, Complex g3, std::size_t k_max)
{
    std::vector<Complex> c(k_max + 1, 0.0);
    if (k_max >= 2)
        c[2] = g2 / 20.0;
    if (k_max >= 3)
        c[3] = g3 / 28.0;
    for (std::size_t k = 4; k <= k_max; ++k) {
        Complex acc = 0.0;
        for (std::size_t m = 2; m + 2 <= k; ++m)
            acc += c[m] * c[k - m];
        c[k] = 3.0 * acc / static_cast<double>((2 * k + 1) * (k - 3));
    }
    return c;
}

struct WeierstrassParams {
    Complex g2;
    Complex g3;
    std::vector<Complex> c;                       // c[k], k >= 2
    std::optional<std::vector<Rational>> exact_c; // when g2, g3 are rational

    static WeierstrassParams from_invariants(Complex g2, Complex g3, std::size_t k_max = 160)
    {
        return {g2, g3, laurent_coefficients(g2, g3, k_max), std::nullopt};
    }
    static WeierstrassParams from_rational(const Rational& g2, const Rational& g3, std::size_t k_max = 160)
    {
        auto ex = laurent_coefficients_exact(g2, g3, k_max);
        std::vector<Complex> c(ex.size(), 0.0);
        for (std::size_t k = 2; k < ex.size(); ++k)
            c[k] = ex[k].convert_to<double>();
        return {g2.convert_to<double>(), g3.convert_to<double>(), std::move(c), std::move(ex)};
    }
    static WeierstrassParams from_lattice(const Lattice& lat, std::size_t k_max = 160)
    {
        auto [g2, g3] = lattice_invariants(lat);
        return from_invariants(g2, g3, k_max);
    }
};

namespace detail {

/// Local offset from the nearest lattice point; fails at poles.
inline Complex reduce_to_cell(Complex z, const Lattice& lat)
{
    const Lattice r = lat.reduced();
    const Complex w = z - r.nearest(z);
    if (std::abs(w) <= 1e-14 * r.min_length())
        fail(ErrorKind::PoleAt, "argument is a lattice point");
    return w;
}

} // namespace detail

/// wp by lattice reduction and the Laurent series at the nearest pole.
inline Complex wp(Complex z, const WeierstrassParams& p, const Lattice& lat)
{
    const Complex w = detail::reduce_to_cell(z, lat);
    const Complex w2 = w * w;
    Complex acc = 1.0 / w2, pw = w2;
    int small = 0;
    for (std::size_t k = 2; k < p.c.size(); ++k) {
        const Complex term = p.c[k] * pw;
        acc += term;
        // Some invariants make runs of coefficients vanish; wait for three
        // consecutive negligible terms.
        small = std::abs(term) < 1e-18 * std::abs(acc) ? small + 1 : 0;
        if (small >= 3)
            break;
        pw *= w2;
    }
    return acc;
}

/// wp' from the termwise derivative of the same series.
inline Complex wp_prime(Complex z, const WeierstrassParams& p, const Lattice& lat)
{
    const Complex w = detail::reduce_to_cell(z, lat);
    const Complex w2 = w * w;
    Complex acc = -2.0 / (w2 * w), pw = w;
    int small = 0;
    for (std::size_t k = 2; k < p.c.size(); ++k) {
        const Complex term = p.c[k] * static_cast<double>(2 * k - 2) * pw;
        acc += term;
        small = std::abs(term) < 1e-18 * std::abs(acc) ? small + 1 : 0;
        if (small >= 3)
            break;
        pw *= w2;
    }
    return acc;
}

/// 1/z^2 + sum_{0 < max(|n1|,|n2|) <= radius} [1/(z-w)^2 - 1/w^2], summed in
/// symmetric shells. Slow; for cross-checks only.
inline Complex wp_lattice_sum(Complex z, const Lattice& lat, int radius)
{
    Complex acc = 1.0 / (z * z);
    for (int m = 1; m <= radius; ++m) {
        Complex shell = 0.0;
        for (int i = -m; i <= m; ++i)
            for (int j = -m; j <= m; ++j) {
                if (std::max(std::abs(i), std::abs(j)) != m)
                    continue;
                const Complex w = static_cast<double>(i) * lat.gen1 + static_cast<double>(j) * lat.gen2;
                if (z == w)
                    fail(ErrorKind::PoleAt, "argument is a lattice point");
                shell += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
            }
        acc += shell;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// The (-2,3;4,-3) urn

namespace detail {

inline double t23_rho()
{
    static const double r = rho<double>(urns::t23());
    return r;
}

} // namespace detail

struct PsiElliptic {
    Complex hexagonal_form; // (rho sqrt3)^-2 wp((z - rho)/(rho sqrt3); hex)
    Complex invariant_form; // wp(z - rho | 0, -4)
};

/// psi for the urn (-2,3;4,-3) with a0 = 2, b0 = 0, by both elliptic forms.
/// Throws ToleranceNotMet if they disagree beyond 1e-8 (relative).
inline PsiElliptic psi_elliptic(Complex z)
{
    const double r = detail::t23_rho();
    const double scale = r * std::sqrt(3.0);
    static const Lattice hex = hexagonal_lattice();
    static const auto hex_params = WeierstrassParams::from_lattice(hex);
    static const Lattice big = hex.scaled(scale);
    static const auto exact_params = WeierstrassParams::from_rational(0, -4);
    PsiElliptic out;
    out.hexagonal_form = wp((z - r) / scale, hex_params, hex) / (scale * scale);
    out.invariant_form = wp(z - r, exact_params, big);
    const double diff = std::abs(out.hexagonal_form - out.invariant_form);
    if (diff > 1e-8 * std::max(1.0, std::abs(out.invariant_form)))
        fail(ErrorKind::ToleranceNotMet, "elliptic forms of psi disagree by " + std::to_string(diff));
    return out;
}

struct LatticePgf {
    Complex value;
    double tail_bound;
};

/// p_n(u) = sum over the hexagonal lattice of (K(u) + (rho sqrt3/delta(u)) w)^{-n-2},
/// truncated to max(|n1|,|n2|) <= radius. The remainder is bounded by
/// int_radius^inf 8x (c x - |K|)^{-n-2} dx, c = |rho sqrt3/delta| sqrt3/2.
inline LatticePgf lattice_pgf(std::int64_t n, Complex u, int radius, double tolerance = 1e-6)
{
    if (n < 1)
        fail(ErrorKind::InvalidArgument, "lattice_pgf needs n >= 1");
    if (radius < 3)
        fail(ErrorKind::InvalidArgument, "lattice_pgf needs radius >= 3");
    const UrnSpec spec = urns::t23();
    const double r = detail::t23_rho();
    const int p = static_cast<int>(n + 2);
    if (std::abs(u) > 1)
        fail(ErrorKind::OutOfRange, "lattice_pgf needs |u| <= 1");
    const Complex k = K_complex(spec, u, r);
    const Complex d = delta(6, u);
    if (d == 0.0)
        return {std::pow(k, -p), 0.0};
    const Complex scale = r * std::sqrt(3.0) / d;
    const Lattice hex = hexagonal_lattice();
    Complex acc = 0.0;
    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j) {
            const Complex w = static_cast<double>(i) * hex.gen1 + static_cast<double>(j) * hex.gen2;
            acc += std::pow(k + scale * w, -p);
        }
    const double c = std::abs(scale) * std::sqrt(3.0) / 2.0;
    const double y0 = c * radius - std::abs(k);
    if (y0 <= 0)
        fail(ErrorKind::TailTooLarge, "radius too small to bound the lattice tail");
    const double tail = 8.0 / (c * c) *
                        (std::pow(y0, 2 - p) / (p - 2) + std::abs(k) * std::pow(y0, 1 - p) / (p - 1));
    if (tail > tolerance)
        fail(ErrorKind::TailTooLarge, "lattice tail bound " + std::to_string(tail) + " exceeds " + std::to_string(tolerance));
    return {acc, tail};
}

/// Coefficients of p_n recovered from lattice_pgf on the circle |u| = r_grid
/// (m points, discrete Fourier inversion).
inline std::vector<double> lattice_pgf_coefficients(std::int64_t n, int radius, int m = 32, double r_grid = 0.8)
{
    const double pi = 3.14159265358979323846;
    std::vector<Complex> vals(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        vals[static_cast<std::size_t>(k)] = lattice_pgf(n, std::polar(r_grid, 2.0 * pi * k / m), radius, 1.0).value;
    std::vector<double> coeffs(static_cast<std::size_t>(m));
    for (int x = 0; x < m; ++x) {
        Complex acc = 0.0;
        for (int k = 0; k < m; ++k)
            acc += vals[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * pi * k * x / m);
        coeffs[static_cast<std::size_t>(x)] = (acc / static_cast<double>(m)).real() / std::pow(r_grid, x);
    }
    return coeffs;
}

// ---------------------------------------------------------------------------
// Classification

struct EllipticCase {
    char label;
    UrnSpec spec; // canonical initial composition
};

inline const std::array<EllipticCase, 6>& elliptic_cases()
{
    static const std::array<EllipticCase, 6> cases{{
        {'A', {2, 3, 1, 2, 0}},
        {'B', {1, 2, 1, 1, 0}},
        {'C', {1, 1, 1, 1, 0}},
        {'D', {1, 1, 2, 2, 0}},
        {'E', {1, 3, 2, 2, 0}},
        {'F', {1, 2, 3, 3, 0}},
    }};
    return cases;
}

struct EllipticVerdict {
    bool is_elliptic = false;
    std::optional<char> matched_case;
    std::string reason;
};

/// Irreducibility, integrality of h/s, then lookup in the six cases (colours
/// may be exchanged).
inline EllipticVerdict classify(const UrnSpec& u)
{
    const auto dc = validate(u);
    const std::int64_t g = matrix_gcd(u);
    if (g != 1)
        return {false, std::nullopt, "reducible: gcd of matrix entries is " + std::to_string(g)};
    if (dc.h % u.s != 0)
        return {false, std::nullopt,
                "h/s = " + to_fraction_string(Rational(dc.h, u.s)) + " fractional"};
    for (const auto& c : elliptic_cases()) {
        const bool same = c.spec.a == u.a && c.spec.b == u.b && c.spec.s == u.s;
        const bool swapped = c.spec.a == u.b && c.spec.b == u.a && c.spec.s == u.s;
        if (same || swapped)
            return {true, c.label,
                    std::string("case ") + c.label + (swapped && !same ? " with colours exchanged" : "")};
    }
    return {false, std::nullopt, "integral h/s but outside the six cases"};
}

/// x <= y <= z <= bound, gcd 1, x | y+z, y | z+x, z | x+y.
inline std::vector<std::array<std::int64_t, 3>> solve_triples(std::int64_t bound)
{
    if (bound < 3)
        fail(ErrorKind::InvalidArgument, "solve_triples needs bound >= 3");
    std::vector<std::array<std::int64_t, 3>> out;
    for (std::int64_t x = 1; x <= bound; ++x)
        for (std::int64_t y = x; y <= bound; ++y)
            for (std::int64_t z = y; z <= bound; ++z) {
                if (std::gcd(std::gcd(x, y), z) != 1)
                    continue;
                if ((y + z) % x == 0 && (z + x) % y == 0 && (x + y) % z == 0)
                    out.push_back({x, y, z});
            }
    return out;
}

/// Elliptic urns with balance s <= s_max, one per colour-exchange pair
/// (a <= b), with their canonical initial compositions.
inline std::vector<EllipticCase> enumerate_elliptic(std::int64_t s_max)
{
    if (s_max < 1)
        fail(ErrorKind::InvalidArgument, "s_max must be >= 1");
    std::vector<EllipticCase> out;
    for (std::int64_t s = 1; s <= s_max; ++s)
        // Irreducible elliptic triples satisfy max(a, b) <= 3 s.
        for (std::int64_t a = 1; a <= 3 * s; ++a)
            for (std::int64_t b = a; b <= 3 * s; ++b) {
                const UrnSpec u{a, b, s, a, 0};
                if (!is_tenable(u))
                    continue;
                const auto v = classify(u);
                if (!v.is_elliptic)
                    continue;
                for (const auto& c : elliptic_cases())
                    if (c.label == *v.matched_case)
                        out.push_back(c);
            }
    std::sort(out.begin(), out.end(), [](const EllipticCase& x, const EllipticCase& y) { return x.label < y.label; });
    return out;
}

inline nlohmann::json verdict_json(const UrnSpec& u, const EllipticVerdict& v)
{
    nlohmann::json j;
    j["spec"] = u;
    j["is_elliptic"] = v.is_elliptic;
    j["matched_case"] = v.matched_case ? nlohmann::json(std::string(1, *v.matched_case)) : nlohmann::json(nullptr);
    j["reason"] = v.reason;
    return j;
}

} // namespace urnlab
