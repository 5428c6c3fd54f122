#pragma once

/**
 * @file polyring.hpp
 * @brief Exact univariate polynomials over the integers, and lazy quotients of them.
 *
 * Every Poincare polynomial in this library lives in Z[q]. Coefficients are
 * arbitrary precision; there is no floating point anywhere. The product
 * formulas for Grassmannians and moduli spaces are quotients whose
 * denominators cancel exactly, so the one non-ring operation is exact_div,
 * which refuses to return when the remainder is nonzero.
 */

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace curvebetti {

using integer = boost::multiprecision::cpp_int;

/// Dense polynomial in q. coeffs()[j] is the coefficient of q^j; the zero
/// polynomial has no coefficients and degree -1.
template <class Coeff>
class basic_poly {
public:
    using coeff_type = Coeff;

    basic_poly() = default;
    basic_poly(std::initializer_list<Coeff> cs) : coeffs_(cs) { trim(); }
    explicit basic_poly(std::vector<Coeff> cs) : coeffs_(std::move(cs)) { trim(); }

    static basic_poly constant(Coeff c) { return basic_poly(std::vector<Coeff>{std::move(c)}); }
    static basic_poly one() { return constant(Coeff{1}); }

    /// c * q^e
    static basic_poly monomial(Coeff c, std::size_t e) {
        std::vector<Coeff> cs(e + 1, Coeff{0});
        cs[e] = std::move(c);
        return basic_poly(std::move(cs));
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const Coeff> coeffs() const noexcept { return coeffs_; }

    Coeff coeff(std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : Coeff{0}; }
    const Coeff& leading() const { return coeffs_.back(); }

    basic_poly& operator+=(const basic_poly& rhs) {
        if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Coeff{0});
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) coeffs_[j] += rhs.coeffs_[j];
        trim();
        return *this;
    }

    basic_poly& operator-=(const basic_poly& rhs) {
        if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Coeff{0});
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) coeffs_[j] -= rhs.coeffs_[j];
        trim();
        return *this;
    }

    basic_poly& operator*=(const basic_poly& rhs) { return *this = *this * rhs; }

    friend basic_poly operator+(basic_poly lhs, const basic_poly& rhs) { return lhs += rhs; }
    friend basic_poly operator-(basic_poly lhs, const basic_poly& rhs) { return lhs -= rhs; }

    friend basic_poly operator-(basic_poly p) {
        for (auto& c : p.coeffs_) c = -c;
        return p;
    }

    friend basic_poly operator*(const basic_poly& a, const basic_poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Coeff> out(a.coeffs_.size() + b.coeffs_.size() - 1, Coeff{0});
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return basic_poly(std::move(out));
    }

    friend bool operator==(const basic_poly&, const basic_poly&) = default;

    /// Exact integer value at q = x. At x = 1 this is the Euler characteristic.
    Coeff evaluate(const Coeff& x) const {
        Coeff acc{0};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// Coefficient sequence symmetric about deg/2; the zero polynomial is palindromic.
    bool is_palindromic() const { return std::equal(coeffs_.begin(), coeffs_.end(), coeffs_.rbegin()); }

    bool is_nonnegative() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coeff& c) { return c >= 0; });
    }

    /// Coefficient reversal at degree deg(p).
    basic_poly reversed() const { return basic_poly(std::vector<Coeff>(coeffs_.rbegin(), coeffs_.rend())); }

    std::string to_string() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const basic_poly& p) {
        if (p.is_zero()) return os << "0";
        bool first = true;
        for (std::size_t j = 0; j < p.coeffs_.size(); ++j) {
            const Coeff& c = p.coeffs_[j];
            if (c == 0) continue;
            Coeff mag = c < 0 ? Coeff(-c) : c;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            if (mag != 1 || j == 0) os << mag;
            if (j >= 1) os << "q";
            if (j >= 2) os << "^" << j;
        }
        return os;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Coeff> coeffs_;
};

using int_poly = basic_poly<integer>;

/// Quotient and remainder of synthetic long division over Z. Throws
/// non_exact_division as soon as an intermediate quotient coefficient is not
/// an integer, and division_by_zero when den = 0.
template <class Coeff>
basic_poly<Coeff> exact_div(const basic_poly<Coeff>& num, const basic_poly<Coeff>& den) {
    if (den.is_zero()) throw division_by_zero("exact_div: division by the zero polynomial");
    if (num.is_zero()) return {};
    if (num.degree() < den.degree())
        throw non_exact_division("exact_div: (" + num.to_string() + ") is not divisible by (" + den.to_string() +
                                 "): numerator degree below denominator degree");

    const std::size_t dd = static_cast<std::size_t>(den.degree());
    const std::size_t qd = static_cast<std::size_t>(num.degree()) - dd;
    auto dc = den.coeffs();
    std::vector<Coeff> rem(num.coeffs().begin(), num.coeffs().end());
    std::vector<Coeff> quot(qd + 1, Coeff{0});
    const Coeff& lead = den.leading();

    for (std::size_t step = 0; step <= qd; ++step) {
        const std::size_t i = qd - step;
        const Coeff& top = rem[i + dd];
        if (top == 0) continue;
        if (top % lead != 0)
            throw non_exact_division("exact_div: (" + num.to_string() + ") is not divisible by (" +
                                     den.to_string() + "): non-integer quotient coefficient at q^" +
                                     std::to_string(i));
        Coeff c = top / lead;
        for (std::size_t j = 0; j <= dd; ++j) rem[i + j] -= c * dc[j];
        quot[i] = std::move(c);
    }
    for (std::size_t j = 0; j < dd; ++j) {
        if (rem[j] != 0)
            throw non_exact_division("exact_div: (" + num.to_string() + ") is not divisible by (" +
                                     den.to_string() + "): nonzero remainder");
    }
    return basic_poly<Coeff>(std::move(quot));
}

/// 1 - q^i
inline int_poly one_minus_q(int i) {
    if (i < 0) throw invalid_parameters("one_minus_q: negative exponent " + std::to_string(i));
    return int_poly::one() - int_poly::monomial(1, static_cast<std::size_t>(i));
}

/// q^e for e >= 0
inline int_poly q_pow(int e) {
    if (e < 0) throw invalid_parameters("q_pow: negative exponent " + std::to_string(e));
    return int_poly::monomial(1, static_cast<std::size_t>(e));
}

/// A quotient of products of polynomials, kept unexpanded until to_poly().
///
/// Multiplication and division only concatenate factor lists. Addition has to
/// expand; it reuses the denominator when both sides already share it.
class rat_expr {
public:
    rat_expr() : num_{int_poly{}} {}
    rat_expr(int_poly p) : num_{std::move(p)} {}  // NOLINT: implicit lift from Z[q]
    rat_expr(int_poly num, int_poly den) : num_{std::move(num)}, den_{std::move(den)} {
        if (den_.front().is_zero()) throw division_by_zero("rat_expr: zero denominator");
    }

    static rat_expr from_integer(long v) { return rat_expr(int_poly::constant(integer(v))); }

    int_poly numerator() const { return product(num_); }
    int_poly denominator() const { return product(den_); }

    /// Exact reduction; throws non_exact_division if the quotient is not in Z[q].
    int_poly to_poly() const {
        if (den_.empty()) return numerator();
        return exact_div(numerator(), denominator());
    }

    rat_expr& operator*=(const rat_expr& rhs) {
        num_.insert(num_.end(), rhs.num_.begin(), rhs.num_.end());
        den_.insert(den_.end(), rhs.den_.begin(), rhs.den_.end());
        return *this;
    }

    rat_expr& operator/=(const rat_expr& rhs) {
        const int_poly d = rhs.numerator();
        if (d.is_zero()) throw division_by_zero("rat_expr: division by zero");
        num_.insert(num_.end(), rhs.den_.begin(), rhs.den_.end());
        den_.insert(den_.end(), rhs.num_.begin(), rhs.num_.end());
        return *this;
    }

    friend rat_expr operator*(rat_expr a, const rat_expr& b) { return a *= b; }
    friend rat_expr operator/(rat_expr a, const rat_expr& b) { return a /= b; }

    friend rat_expr operator+(const rat_expr& a, const rat_expr& b) { return combine(a, b, false); }
    friend rat_expr operator-(const rat_expr& a, const rat_expr& b) { return combine(a, b, true); }

private:
    static int_poly product(const std::vector<int_poly>& fs) {
        int_poly out = int_poly::one();
        for (const auto& f : fs) out *= f;
        return out;
    }

    static rat_expr combine(const rat_expr& a, const rat_expr& b, bool subtract) {
        const int_poly da = a.denominator();
        const int_poly db = b.denominator();
        int_poly na = a.numerator();
        int_poly nb = b.numerator();
        if (da == db) {
            int_poly n = subtract ? na - nb : na + nb;
            return da == int_poly::one() ? rat_expr(std::move(n)) : rat_expr(std::move(n), da);
        }
        int_poly n = subtract ? na * db - nb * da : na * db + nb * da;
        return rat_expr(std::move(n), da * db);
    }

    std::vector<int_poly> num_;
    std::vector<int_poly> den_;
};

/// prod_{i=lo}^{hi} f(i); an empty range (hi < lo) is 1.
template <class F>
rat_expr rat_product(int lo, int hi, F&& f) {
    rat_expr out(int_poly::one());
    for (int i = lo; i <= hi; ++i) out *= rat_expr(f(i));
    return out;
}

/// (1 - q^m) / (1 - q), i.e. 1 + q + ... + q^{m-1}, kept as a quotient.
inline rat_expr q_bracket(int m) { return rat_expr(one_minus_q(m), one_minus_q(1)); }

}  // namespace curvebetti
