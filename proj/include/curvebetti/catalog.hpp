#pragma once

/**
 * @file catalog.hpp
 * @brief Poincare polynomials of the named spaces the moduli computations are built from.
 *
 * All spaces here have vanishing odd cohomology, so a Poincare polynomial is
 * sum_j b_{2j} q^j. Grassmannians use the Gaussian binomial product formula;
 * the Fano varieties of lines and planes on Gr(k,n) are Grassmannian bundles
 * over Grassmannians; the Kontsevich spaces of conics and twisted cubics use
 * the Lopez-Martin closed forms.
 */

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polyring.hpp"

namespace curvebetti {

/// A Poincare polynomial together with the complex dimension and number of
/// connected components it certifies.
///
/// Coefficients are never negative. dim is the degree; components is the
/// constant coefficient. The empty space is the zero polynomial with dim -1
/// and no components. Strata classes built during surgery (for instance a
/// q-shifted summand) may have constant term 0 while being nonzero.
class poincare_poly {
public:
    poincare_poly() = default;  // empty space

    explicit poincare_poly(int_poly p) : poly_(std::move(p)) {
        if (!poly_.is_nonnegative())
            throw negative_betti("negative Betti number in " + poly_.to_string());
    }

    /// Also asserts the claimed complex dimension.
    poincare_poly(int_poly p, int claimed_dim) : poincare_poly(std::move(p)) {
        if (!poly_.is_zero() && poly_.degree() != claimed_dim)
            throw dimension_mismatch("expected dimension " + std::to_string(claimed_dim) + " but " +
                                     poly_.to_string() + " has degree " + std::to_string(poly_.degree()));
    }

    static poincare_poly empty() { return {}; }
    static poincare_poly point() { return poincare_poly(int_poly::one()); }

    const int_poly& poly() const noexcept { return poly_; }
    int dim() const noexcept { return poly_.degree(); }
    integer components() const { return poly_.coeff(0); }
    bool is_empty() const noexcept { return poly_.is_zero(); }
    integer euler() const { return poly_.evaluate(integer(1)); }
    bool is_palindromic() const { return poly_.is_palindromic(); }

    friend bool operator==(const poincare_poly&, const poincare_poly&) = default;

    friend std::ostream& operator<<(std::ostream& os, const poincare_poly& p) { return os << p.poly_; }

private:
    int_poly poly_;
};

/// The four auxiliary polynomials of the twisted-cubic Kontsevich formula.
struct martin_polynomials {
    int_poly f1;
    int_poly f2;
    int_poly f3;
    int_poly f4;

    static const martin_polynomials& get() {
        static const martin_polynomials m{
            int_poly{1, 0, 2, 3, 3, -1, 1, -3, -3, -2, 0, -1},
            int_poly{1, 0, 5, 2, -2, -5, 0, -1},
            int_poly{2, 0, 3, 1, -1, -3, 0, -2},
            int_poly{1, 6, 3, 2, -2, -3, -6, -1},
        };
        return m;
    }
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw invalid_parameters(what);
}

inline std::string kn(int k, int n) { return "(k,n)=(" + std::to_string(k) + "," + std::to_string(n) + ")"; }

/// prod_{i=1}^{k} (1 - q^{n-i+1}) / (1 - q^i), the Gaussian binomial as a quotient.
inline rat_expr gaussian_quotient(int k, int n) {
    return rat_product(1, k, [n](int i) { return one_minus_q(n - i + 1); }) /
           rat_product(1, k, [](int i) { return one_minus_q(i); });
}

}  // namespace detail

/// P^m: 1 + q + ... + q^m.
inline poincare_poly projective(int m) {
    detail::require(m >= 0, "projective: dimension must be nonnegative, got " + std::to_string(m));
    return poincare_poly(int_poly(std::vector<integer>(static_cast<std::size_t>(m) + 1, integer(1))), m);
}

/// Rational cohomology of a weighted projective space equals that of the
/// unweighted one of the same dimension.
inline poincare_poly weighted_projective(std::span<const int> weights) {
    detail::require(!weights.empty(), "weighted_projective: need at least one weight");
    for (int w : weights) detail::require(w >= 1, "weighted_projective: weights must be positive");
    return projective(static_cast<int>(weights.size()) - 1);
}

inline poincare_poly weighted_projective(std::initializer_list<int> weights) {
    return weighted_projective(std::span<const int>(weights.begin(), weights.size()));
}

/// Gr(k,n) via the Gaussian binomial. Out-of-range k is the empty space.
inline poincare_poly grassmannian(int k, int n) {
    detail::require(n >= 0, "grassmannian: n must be nonnegative, got " + std::to_string(n));
    if (k < 0 || k > n) return poincare_poly::empty();
    return poincare_poly(detail::gaussian_quotient(k, n).to_poly(), k * (n - k));
}

/// Lines on Gr(k,n): a Gr(k-1,k+1)-bundle over Gr(k+1,n).
inline poincare_poly f1_gr(int k, int n) {
    detail::require(1 <= k && k <= n - 1, "f1_gr: need 1 <= k <= n-1, got " + detail::kn(k, n));
    rat_expr r = detail::gaussian_quotient(k + 1, n) *
                 (rat_product(1, k - 1, [k](int i) { return one_minus_q(k - i + 2); }) /
                  rat_product(1, k - 1, [](int i) { return one_minus_q(i); }));
    return poincare_poly(r.to_poly(), (k + 1) * (n - k - 1) + 2 * (k - 1));
}

/// Planes on Gr(k,n), two families: a Gr(k-2,k+1)-bundle over Gr(k+1,n)
/// (present iff k >= 2) and a Gr(k-1,k+2)-bundle over Gr(k+2,n) (present iff
/// n >= k+2). Both absent gives the empty space.
inline poincare_poly f2_gr(int k, int n) {
    detail::require(1 <= k && k <= n - 1, "f2_gr: need 1 <= k <= n-1, got " + detail::kn(k, n));
    int_poly sum;
    if (k >= 2) sum += grassmannian(k - 2, k + 1).poly() * grassmannian(k + 1, n).poly();
    if (n >= k + 2) sum += grassmannian(k - 1, k + 2).poly() * grassmannian(k + 2, n).poly();
    return poincare_poly(std::move(sum));
}

/// Lines through a fixed point of Gr(k,n): P^{k-1} x P^{n-k-1}.
inline poincare_poly fx_gr(int k, int n) {
    detail::require(1 <= k && k <= n - 1, "fx_gr: need 1 <= k <= n-1, got " + detail::kn(k, n));
    rat_expr r(one_minus_q(n - k) * one_minus_q(k), one_minus_q(1) * one_minus_q(1));
    return poincare_poly(r.to_poly(), n - 2);
}

/// Kontsevich space of degree-d maps P^1 -> P^1, d = 2 or 3.
inline poincare_poly mbar_p1(int d) {
    switch (d) {
        case 2:
            return poincare_poly(int_poly{1, 1, 1}, 2);
        case 3:
            return poincare_poly(int_poly{1, 1, 2, 1, 1}, 4);
        default:
            throw invalid_parameters("mbar_p1: only d = 2 and d = 3 are supported, got " + std::to_string(d));
    }
}

/// Rational factor of the twisted-cubic formula, before multiplying by P(F_1(Gr(k,n))).
inline rat_expr martin_cubic_rational(int k, int n) {
    const auto& m = martin_polynomials::get();
    const int_poly one = int_poly::one();
    const int_poly q = q_pow(1);
    const int_poly one_plus_q = one + q;
    int_poly num = m.f1 * (one + q_pow(2 * n)) +
                   one_plus_q * one_plus_q *
                       (m.f2 * q_pow(n) * (one + q_pow(2)) -
                        m.f3 * q * (one + q_pow(n)) * (q_pow(k) + q_pow(n - k))) +
                   m.f4 * q_pow(2) * (q_pow(2 * k) + q_pow(2 * n - 2 * k));
    int_poly den = one_minus_q(1) * one_minus_q(2) * one_minus_q(2) * one_minus_q(3) * one_minus_q(3);
    return rat_expr(std::move(num), std::move(den));
}

/// The Kontsevich-space formula for degree d on Gr(k,n), unguarded: any
/// 0 <= k <= n is evaluated and a non-integral quotient surfaces as
/// non_exact_division.
inline int_poly martin_formula(int k, int n, int d) {
    detail::require(0 <= k && k <= n, "martin_formula: need 0 <= k <= n, got " + detail::kn(k, n));
    const int_poly one = int_poly::one();
    const int_poly q = q_pow(1);
    if (d == 2) {
        int_poly lead = (one + q_pow(n)) * (one + q_pow(3)) - q * (one + q) * (q_pow(k) + q_pow(n - k));
        rat_expr r = rat_expr(std::move(lead)) * rat_product(k, n, [](int i) { return one_minus_q(i); }) /
                     (rat_expr(one_minus_q(1) * one_minus_q(1) * one_minus_q(2) * one_minus_q(2)) *
                      rat_product(1, n - k - 1, [](int i) { return one_minus_q(i); }));
        return r.to_poly();
    }
    if (d == 3) {
        rat_expr r = martin_cubic_rational(k, n) * detail::gaussian_quotient(k + 1, n) *
                     detail::gaussian_quotient(k - 1, k + 1);
        return r.to_poly();
    }
    throw invalid_parameters("martin_formula: only d = 2 and d = 3 are supported, got " + std::to_string(d));
}

/// P(Mbar(Gr(k,n),d)) for 1 <= k <= n-1, n >= 3, d in {2,3}; the degree is
/// checked against k(n-k) + dn - 3.
inline poincare_poly martin_m(int k, int n, int d) {
    detail::require(d == 2 || d == 3, "martin_m: only d = 2 and d = 3 are supported, got " + std::to_string(d));
    detail::require(1 <= k && k <= n - 1 && n >= 3, "martin_m: need 1 <= k <= n-1 and n >= 3, got " + detail::kn(k, n));
    return poincare_poly(martin_formula(k, n, d), k * (n - k) + d * n - 3);
}

/// Startup consistency check of the hardcoded constants: at Gr(1,2) = P^1 the
/// Kontsevich formulas must reproduce Mbar(P^1,2) and Mbar(P^1,3).
inline void catalog_self_check() {
    for (int d : {2, 3}) {
        if (martin_formula(1, 2, d) != mbar_p1(d).poly())
            throw arithmetic_error("catalog self-check failed for d = " + std::to_string(d));
    }
}

}  // namespace curvebetti
