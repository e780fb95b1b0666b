#pragma once

#include "urnlab/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace urnlab {

/// Truncated power series sum_{k < order} c_k x^k over a field T.
/// Every operation keeps the truncation order of its operands (the minimum
/// when two orders differ).
template <typename T = Rational>
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(std::size_t order) : c_(order, T(0)) {}
    PowerSeries(std::vector<T> coeffs, std::size_t order) : c_(std::move(coeffs)) { c_.resize(order, T(0)); }

    static PowerSeries constant(const T& v, std::size_t order)
    {
        PowerSeries r(order);
        if (order)
            r.c_[0] = v;
        return r;
    }
    /// The series x (identity map).
    static PowerSeries variable(std::size_t order)
    {
        PowerSeries r(order);
        if (order > 1)
            r.c_[1] = T(1);
        return r;
    }

    std::size_t order() const { return c_.size(); }
    const std::vector<T>& coefficients() const { return c_; }
    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
    T& operator[](std::size_t k) { return c_[k]; }
    const T& operator[](std::size_t k) const { return c_[k]; }

    PowerSeries truncated(std::size_t order) const
    {
        PowerSeries r = *this;
        r.c_.resize(std::min(order, c_.size()), T(0));
        return r;
    }

    std::size_t valuation() const
    {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k] != 0)
                return k;
        return c_.size();
    }

    PowerSeries& operator+=(const PowerSeries& o)
    {
        shrink_to(o.order());
        for (std::size_t k = 0; k < c_.size(); ++k)
            c_[k] += o.c_[k];
        return *this;
    }
    PowerSeries& operator-=(const PowerSeries& o)
    {
        shrink_to(o.order());
        for (std::size_t k = 0; k < c_.size(); ++k)
            c_[k] -= o.c_[k];
        return *this;
    }
    PowerSeries& operator*=(const T& k)
    {
        for (auto& c : c_)
            c *= k;
        return *this;
    }

    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator-(PowerSeries a)
    {
        for (auto& c : a.c_)
            c = -c;
        return a;
    }
    friend PowerSeries operator*(PowerSeries a, const T& k) { return a *= k; }
    friend PowerSeries operator*(const T& k, PowerSeries a) { return a *= k; }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b)
    {
        const std::size_t n = std::min(a.order(), b.order());
        PowerSeries r(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.c_[i] == 0)
                continue;
            for (std::size_t j = 0; i + j < n; ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.c_ == b.c_; }

    /// 1/f; requires f(0) != 0.
    PowerSeries inverse() const
    {
        if (c_.empty() || c_[0] == 0)
            fail(ErrorKind::InvalidArgument, "series inverse needs a nonzero constant term");
        const std::size_t n = c_.size();
        PowerSeries r(n);
        const T inv0 = T(1) / c_[0];
        r.c_[0] = inv0;
        for (std::size_t k = 1; k < n; ++k) {
            T acc = 0;
            for (std::size_t j = 1; j <= k; ++j)
                acc += c_[j] * r.c_[k - j];
            r.c_[k] = -acc * inv0;
        }
        return r;
    }

    friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) { return a * b.inverse(); }

    PowerSeries derivative() const
    {
        PowerSeries r(c_.size());
        for (std::size_t k = 1; k < c_.size(); ++k)
            r.c_[k - 1] = c_[k] * T(static_cast<long>(k));
        return r;
    }

    /// Antiderivative vanishing at 0 (the top coefficient is dropped).
    PowerSeries integral() const
    {
        PowerSeries r(c_.size());
        for (std::size_t k = 1; k < c_.size(); ++k)
            r.c_[k] = c_[k - 1] / T(static_cast<long>(k));
        return r;
    }

    /// f^alpha with f(0)^alpha supplied by the caller, via the recurrence
    /// n f0 g_n = sum_{k=1}^n ((alpha+1)k - n) f_k g_{n-k}.
    PowerSeries pow(const T& alpha, const T& lead_power) const
    {
        if (c_.empty() || c_[0] == 0)
            fail(ErrorKind::InvalidArgument, "series power needs a nonzero constant term");
        const std::size_t n = c_.size();
        PowerSeries g(n);
        g.c_[0] = lead_power;
        for (std::size_t m = 1; m < n; ++m) {
            T acc = 0;
            for (std::size_t k = 1; k <= m; ++k) {
                if (c_[k] == 0)
                    continue;
                acc += ((alpha + T(1)) * T(static_cast<long>(k)) - T(static_cast<long>(m))) * c_[k] * g.c_[m - k];
            }
            g.c_[m] = acc / (T(static_cast<long>(m)) * c_[0]);
        }
        return g;
    }

    /// f^alpha for exact coefficients; f(0)^alpha must be rational.
    PowerSeries pow(const T& alpha) const
        requires std::is_same_v<T, Rational>
    {
        if (c_.empty() || c_[0] == 0)
            fail(ErrorKind::InvalidArgument, "series power needs a nonzero constant term");
        auto lead = rational_power(c_[0], alpha);
        if (!lead)
            fail(ErrorKind::InvalidArgument, "leading coefficient " + to_fraction_string(c_[0]) + " has no rational power " +
                                                 to_fraction_string(alpha));
        return pow(alpha, *lead);
    }

    PowerSeries pow_int(std::int64_t e) const
    {
        if (e < 0)
            return inverse().pow_int(-e);
        PowerSeries r = constant(T(1), c_.size()), b = *this;
        while (e) {
            if (e & 1)
                r = r * b;
            e >>= 1;
            if (e)
                b = b * b;
        }
        return r;
    }

    /// exp(f); requires f(0) = 0.
    PowerSeries exp() const
    {
        if (!c_.empty() && c_[0] != 0)
            fail(ErrorKind::InvalidArgument, "series exp needs a zero constant term");
        const std::size_t n = c_.size();
        PowerSeries g(n);
        if (!n)
            return g;
        g.c_[0] = 1;
        // g' = f' g
        for (std::size_t m = 1; m < n; ++m) {
            T acc = 0;
            for (std::size_t k = 1; k <= m; ++k)
                acc += T(static_cast<long>(k)) * c_[k] * g.c_[m - k];
            g.c_[m] = acc / T(static_cast<long>(m));
        }
        return g;
    }

    /// log(f); requires f(0) = 1.
    PowerSeries log() const
    {
        if (c_.empty() || c_[0] != 1)
            fail(ErrorKind::InvalidArgument, "series log needs constant term 1");
        return (derivative() * inverse()).integral();
    }

    /// f(g); requires g(0) = 0.
    PowerSeries compose(const PowerSeries& g) const
    {
        if (g.order() && g.c_[0] != 0)
            fail(ErrorKind::InvalidArgument, "composition needs an inner series with zero constant term");
        const std::size_t n = std::min(order(), g.order());
        PowerSeries r(n);
        for (std::size_t k = c_.size(); k-- > 0;) {
            r = r * g.truncated(n);
            if (n)
                r.c_[0] += c_[k];
        }
        return r;
    }

    /// Compositional inverse; requires f(0) = 0 and f'(0) != 0.
    PowerSeries reverse() const
    {
        if (c_.size() < 2 || c_[0] != 0)
            fail(ErrorKind::ReversionFailure, "reversion needs a series with zero constant term");
        if (c_[1] == 0)
            fail(ErrorKind::ReversionFailure, "reversion needs a nonzero linear coefficient");
        const std::size_t n = c_.size();
        // Lagrange: [x^k] g = (1/k) [y^{k-1}] (y/f(y))^k
        PowerSeries q(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k)
            q.c_[k] = c_[k + 1];
        const PowerSeries phi = q.inverse();
        PowerSeries r(n);
        PowerSeries p = constant(T(1), n - 1);
        for (std::size_t k = 1; k < n; ++k) {
            p = p * phi;
            r.c_[k] = p.c_[k - 1] / T(static_cast<long>(k));
        }
        return r;
    }

    template <typename X>
    X operator()(const X& x) const
    {
        X acc = X(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + convert<X>(*it);
        return acc;
    }

private:
    template <typename X>
    static X convert(const T& v)
    {
        if constexpr (std::is_same_v<X, T>)
            return v;
        else if constexpr (std::is_same_v<T, Rational> && std::is_same_v<X, Real>)
            return Real(v);
        else if constexpr (std::is_same_v<T, Rational>)
            return X(v.template convert_to<double>());
        else
            return X(v);
    }

    void shrink_to(std::size_t n)
    {
        if (n < c_.size())
            c_.resize(n);
    }

    std::vector<T> c_;
};

/// z^offset * sum_k c_k z^{k*step}, exact. Used for Puiseux-type expansions
/// whose exponents form an arithmetic progression.
struct FormalSeries {
    std::string var_name = "z";
    Rational offset = 0;
    Rational step = 1;
    std::vector<Rational> coeffs;

    std::size_t order() const { return coeffs.size(); }
    Rational exponent(std::size_t k) const { return offset + step * Rational(static_cast<long>(k)); }
    Rational coeff(std::size_t k) const { return k < coeffs.size() ? coeffs[k] : Rational(0); }

    /// Coefficient of z^e, zero if e is not on the progression.
    Rational coeff_at(const Rational& e) const
    {
        const Rational k = (e - offset) / step;
        if (!is_integer(k) || k < 0)
            return 0;
        return coeff(boost::multiprecision::numerator(k).convert_to<std::size_t>());
    }

    PowerSeries<Rational> body() const { return PowerSeries<Rational>(coeffs, coeffs.size()); }

    static FormalSeries from_body(std::string var, Rational offset, Rational step, const PowerSeries<Rational>& b)
    {
        return {std::move(var), std::move(offset), std::move(step), b.coefficients()};
    }

    friend bool operator==(const FormalSeries& x, const FormalSeries& y)
    {
        return x.offset == y.offset && x.step == y.step && x.coeffs == y.coeffs;
    }

    FormalSeries truncated(std::size_t order) const
    {
        FormalSeries r = *this;
        r.coeffs.resize(std::min(order, coeffs.size()));
        return r;
    }

    template <typename X>
    X operator()(const X& z) const
    {
        using std::pow;
        X acc = X(0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0)
                continue;
            const double e = exponent(k).convert_to<double>();
            acc += X(coeffs[k].convert_to<double>()) * pow(z, e);
        }
        return acc;
    }

    std::string to_string() const
    {
        std::string out;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0)
                continue;
            const Rational e = exponent(k);
            const bool negative = coeffs[k] < 0;
            const Rational mag = negative ? Rational(-coeffs[k]) : coeffs[k];
            std::string term;
            if (e == 0 || mag != 1)
                term = to_fraction_string(mag);
            if (e != 0) {
                term += (term.empty() ? "" : "*") + var_name;
                if (e != 1)
                    term += "^" + (is_integer(e) ? to_fraction_string(e) : "(" + to_fraction_string(e) + ")");
            }
            if (out.empty())
                out = negative ? "-" + term : term;
            else
                out += (negative ? " - " : " + ") + term;
        }
        return out.empty() ? "0" : out;
    }
};

/// Product of two series on the same exponent lattice.
inline FormalSeries operator*(const FormalSeries& x, const FormalSeries& y)
{
    if (x.step != y.step)
        fail(ErrorKind::InvalidArgument, "series product needs a common exponent step");
    const std::size_t n = std::min(x.order(), y.order());
    return FormalSeries::from_body(x.var_name, x.offset + y.offset, x.step,
                                   x.body().truncated(n) * y.body().truncated(n));
}

/// x^alpha; the leading coefficient must have a rational alpha-th power.
inline FormalSeries pow(const FormalSeries& x, const Rational& alpha)
{
    return FormalSeries::from_body(x.var_name, x.offset * alpha, x.step, x.body().pow(alpha));
}

inline nlohmann::json to_json_value(const FormalSeries& f)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        const Rational e = f.exponent(k);
        terms.push_back({numerator(e).str(), denominator(e).str(), numerator(f.coeffs[k]).str(),
                         denominator(f.coeffs[k]).str()});
    }
    return terms;
}

} // namespace urnlab
