#pragma once

#include "urnlab/numeric.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace urnlab {

/// Dense univariate polynomial with exact rational coefficients.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(const Rational& c, std::size_t degree)
    {
        std::vector<Rational> v(degree + 1);
        v[degree] = c;
        return Polynomial(std::move(v));
    }

    /// -1 for the zero polynomial.
    std::ptrdiff_t degree() const { return static_cast<std::ptrdiff_t>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coefficients() const { return c_; }

    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

    template <typename T>
    T operator()(const T& x) const
    {
        T acc = T(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + to_value<T>(*it);
        return acc;
    }

    Polynomial derivative() const
    {
        if (c_.size() <= 1)
            return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k)
            d[k - 1] = c_[k] * Rational(static_cast<long>(k));
        return Polynomial(std::move(d));
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) { return *this += o * Rational(-1); }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(Polynomial a, const Rational& k)
    {
        for (auto& c : a.c_)
            c *= k;
        a.trim();
        return a;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// "c0 + c1*v + c2*v^2" with exact fractions.
    std::string to_string(const std::string& var = "v") const
    {
        if (c_.empty())
            return "0";
        std::string out;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0)
                continue;
            std::string term = to_fraction_string(c_[k]);
            if (k >= 1)
                term += "*" + var + (k > 1 ? "^" + std::to_string(k) : "");
            out += out.empty() ? term : " + " + term;
        }
        return out;
    }

private:
    template <typename T>
    static T to_value(const Rational& q)
    {
        if constexpr (std::is_same_v<T, Rational>)
            return q;
        else if constexpr (std::is_arithmetic_v<T>)
            return static_cast<T>(q.convert_to<double>());
        else
            return T(q.convert_to<double>());
    }

    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<Rational> c_;
};

} // namespace urnlab
