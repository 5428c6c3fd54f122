#pragma once

/**
 * @file pipelines.hpp
 * @brief Poincare polynomials of the Simpson and Hilbert compactifications of
 *        conics and twisted cubics on Gr(k,n).
 *
 * Each of S(Gr(k,n),2), S(Gr(k,n),3) and H(Gr(k,n),3) is computed two ways:
 *
 *   - closed: the published closed-form rational expression, evaluated as a
 *     single quotient and reduced by one exact division;
 *   - pipeline: starting from the Kontsevich space and replaying the chain of
 *     blow-ups and blow-downs term by term with catalog polynomials.
 *
 * The routes share only the Kontsevich-space formula, so agreement between
 * them is a real check of both.
 *
 * Blow-up chain for twisted cubics: Mbar -> blow up G^1_0, G^2_1, G^3_2, then
 * blow down G^2_3, G^3_4, G^1_5 -> S, then blow up Delta(X) -> H. The
 * overview diagram of the same chain numbers the blow-down loci one higher
 * (G^2_4, G^3_5, G^1_6); step labels use the numbering above.
 */

#include <algorithm>
#include <atomic>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "polyring.hpp"
#include "surgery.hpp"

namespace curvebetti {

enum class compactification { M, S, H };

inline const char* to_string(compactification c) {
    switch (c) {
        case compactification::M:
            return "M";
        case compactification::S:
            return "S";
        case compactification::H:
            return "H";
    }
    return "?";
}

inline std::optional<compactification> parse_compactification(const std::string& s) {
    if (s == "M") return compactification::M;
    if (s == "S") return compactification::S;
    if (s == "H") return compactification::H;
    return std::nullopt;
}

enum class mode { closed, pipeline };

/// Moduli space of degree-d rational curves on Gr(k,n) under one of the
/// three compactifications.
struct moduli_key {
    int k = 1;
    int n = 3;
    int d = 2;
    compactification comp = compactification::M;

    auto operator<=>(const moduli_key&) const = default;

    /// Canonical expression, e.g. "S(Gr(1,3),3)".
    std::string to_string() const {
        return std::string(curvebetti::to_string(comp)) + "(Gr(" + std::to_string(k) + "," + std::to_string(n) +
               ")," + std::to_string(d) + ")";
    }

    moduli_key dual() const { return {n - k, n, d, comp}; }
    moduli_key normalized() const { return k <= n - k ? *this : dual(); }
};

/// Throws invalid_parameters when the key is outside the supported domain.
inline void validate(const moduli_key& key) {
    const std::string name = key.to_string();
    if (key.d != 2 && key.d != 3)
        throw invalid_parameters(name + ": only d = 2 and d = 3 are supported");
    if (key.k < 1 || key.k > key.n - 1) throw invalid_parameters(name + ": need 1 <= k <= n-1");
    if (key.n < 3) throw invalid_parameters(name + ": need n >= 3 (Gr(1,2) is a line)");
    if (key.comp == compactification::H) {
        if (key.d != 3)
            throw invalid_parameters(name + ": the Hilbert compactification is only modeled for twisted cubics (d = 3)");
        if (key.n == 3)
            throw invalid_parameters(name +
                                     ": Gr(k,3) is a projective plane, every cubic is planar and the "
                                     "planar-cubic locus Delta(X) is all of S, so the blow-up relating H to S "
                                     "degenerates");
    }
}

inline bool is_valid(const moduli_key& key) {
    try {
        validate(key);
        return true;
    } catch (const invalid_parameters&) {
        return false;
    }
}

inline int dim_expected(const moduli_key& key) { return key.k * (key.n - key.k) + key.d * key.n - 3; }

/// P(S(Gr(1,3),3)), the planar twisted-cubic fiber of Delta(X) over F_2.
inline const int_poly& printed_s_p2_cubics() {
    static const int_poly p{1, 2, 3, 3, 3, 3, 3, 2, 1};
    return p;
}

namespace closed_form {

/// Conics, Simpson compactification.
inline int_poly s2(int k, int n) {
    const int_poly one = int_poly::one();
    const int_poly q = q_pow(1);
    int_poly lead = (one + q_pow(n)) * (one + q_pow(3)) - q * (one + q) * (q_pow(k) + q_pow(n - k)) +
                    one_minus_q(2) * (q_pow(3) - q_pow(n - 2));
    rat_expr r = rat_expr(std::move(lead)) * rat_product(n - k, n, [](int i) { return one_minus_q(i); }) /
                 (rat_expr(one_minus_q(1) * one_minus_q(1) * one_minus_q(2) * one_minus_q(2)) *
                  rat_product(1, k - 1, [](int i) { return one_minus_q(i); }));
    return r.to_poly();
}

/// Twisted cubics, Simpson compactification.
inline int_poly s3(int k, int n) {
    const rat_expr one(int_poly::one());
    const int_poly mbar3{1, 1, 2, 1, 1};
    const int_poly mbar2{1, 1, 1};
    const int_poly one_plus_q{1, 1};
    auto b = [](int m) { return q_bracket(m); };
    const rat_expr lines_through_point(one_minus_q(n - k) * one_minus_q(k), one_minus_q(1) * one_minus_q(1));

    rat_expr brace = martin_cubic_rational(k, n);
    brace = brace + rat_expr(mbar3) * (b(2 * n - 4) - one);
    brace = brace + b(2) * (lines_through_point + b(n - 2) - one) * rat_expr(mbar2) * (b(n - 1) - one);
    brace = brace + b(n - 2) * rat_expr(one_plus_q * mbar3 + q_pow(1) * one_plus_q * mbar2) * (b(n - 2) - one);
    brace = brace - b(2) *
                        (b(n - 1) * (lines_through_point + b(n - 2) - one) +
                         b(2) * b(n - 2) * (b(n - 2) - one)) *
                        (b(3) - one);
    brace = brace - b(2) * b(n - 2) * b(n - 2) * (b(5) - one);
    brace = brace - b(n - 2) * rat_expr(one_minus_q(n - 3), one_minus_q(2)) * (b(8) - one);

    rat_expr lines = rat_product(1, k + 1, [n](int i) { return one_minus_q(n - i + 1); }) /
                     rat_product(1, k + 1, [](int i) { return one_minus_q(i); }) *
                     rat_product(1, k - 1, [k](int i) { return one_minus_q(k - i + 2); }) /
                     rat_product(1, k - 1, [](int i) { return one_minus_q(i); });
    return (brace * lines).to_poly();
}

/// Twisted cubics, Hilbert compactification. The plane family indexed by
/// Gr(k-2,k+1) exists only for k >= 2, and the family indexed by Gr(k+2,n)
/// only for n >= k+2; absent families contribute nothing.
inline int_poly h3(int k, int n) {
    const rat_expr one(int_poly::one());
    rat_expr extra(int_poly{});
    if (k >= 2) {
        extra = extra + rat_product(1, k + 1, [n](int i) { return one_minus_q(n - i + 1); }) /
                            rat_product(1, k + 1, [](int i) { return one_minus_q(i); }) *
                            rat_product(1, k - 2, [k](int i) { return one_minus_q(k - i + 2); }) /
                            rat_product(1, k - 2, [](int i) { return one_minus_q(i); }) *
                            (q_bracket(2 * n - k - 4) - one);
    }
    if (n >= k + 2) {
        extra = extra + rat_product(1, k + 2, [n](int i) { return one_minus_q(n - i + 1); }) /
                            rat_product(1, k + 2, [](int i) { return one_minus_q(i); }) *
                            rat_product(1, k - 1, [k](int i) { return one_minus_q(k - i + 3); }) /
                            rat_product(1, k - 1, [](int i) { return one_minus_q(i); }) *
                            (q_bracket(n + k - 4) - one);
    }
    return s3(k, n) + printed_s_p2_cubics() * extra.to_poly();
}

}  // namespace closed_form

namespace chain {

/// Mbar(X,2) -> Mbar_1 <- S(X,2): blow up the Mbar(P^1,2)-bundle over lines,
/// then blow down the P(Ext^1)-bundle over lines.
inline pipeline s2(int k, int n) {
    const poincare_poly lines = f1_gr(k, n);
    pipeline p{martin_m(k, n, 2), {}};
    p.steps.push_back(surgery_step::blowup("Γ¹(X)", bundle_total(lines, mbar_p1(2)), n - 2));
    p.steps.push_back(surgery_step::blowdown("Γ¹₂(X)", bundle_total(lines, projective(n - 3)), projective(2)));
    return p;
}

/// Mbar(X,3) to S(X,3): three blow-ups then three blow-downs.
inline pipeline s3(int k, int n) {
    const poincare_poly space = grassmannian(k, n);
    const poincare_poly lines = f1_gr(k, n);
    const poincare_poly through_point = fx_gr(k, n);
    const poincare_poly p1 = projective(1);
    const poincare_poly pn3 = projective(n - 3);
    const poincare_poly pn2 = projective(n - 2);

    // blow-up of the diagonal in ev^{-1}(x) x ev^{-1}(x)
    const poincare_poly bl_diag = blowup_apply(bundle_total(through_point, through_point), through_point, n - 2);

    // pairs (double line, point) and (line + conic) strata over a line
    const poincare_poly line_strata = poincare_poly(
        bundle_total(p1, mbar_p1(3)).poly() + q_pow(1) * bundle_total(p1, mbar_p1(2)).poly());

    const poincare_poly contracted =
        union_disjoint(bundle_total(bl_diag, pn2),
                       poincare_poly(bundle_total(bundle_total(p1, through_point), pn3).poly() *
                                     (pn3.poly() - int_poly::one())));

    pipeline p{martin_m(k, n, 3), {}};
    p.steps.push_back(surgery_step::blowup("Γ¹₀", bundle_total(lines, mbar_p1(3)), 2 * n - 4));
    p.steps.push_back(
        surgery_step::blowup("Γ²₁", bundle_total(bundle_total(space, bl_diag), mbar_p1(2)), n - 1));
    p.steps.push_back(surgery_step::blowup("Γ³₂", bundle_total(bundle_total(lines, pn3), line_strata), n - 2));
    p.steps.push_back(surgery_step::blowdown("Γ²₃", bundle_total(space, contracted), weighted_projective({1, 2, 2})));
    p.steps.push_back(surgery_step::blowdown("Γ³₄", bundle_total(lines, bundle_total(bundle_total(p1, pn3), pn3)),
                                             weighted_projective({1, 2, 2, 3, 3})));
    p.steps.push_back(
        surgery_step::blowdown("Γ¹₅", bundle_total(lines, grassmannian(2, n - 2)), projective(7)));
    return p;
}

/// S(X,3) -> H(X,3): blow up Delta(X), an S(P^2,3)-bundle over each nonempty
/// family of planes.
inline pipeline h3(int k, int n) {
    pipeline p = s3(k, n);
    const poincare_poly planar = run_pipeline(s3(1, 3)).result;
    if (k >= 2) {
        poincare_poly family = bundle_total(grassmannian(k + 1, n), grassmannian(k - 2, k + 1));
        p.steps.push_back(surgery_step::blowup("Δ(X)[A]", bundle_total(family, planar), 2 * n - k - 4));
    }
    if (n >= k + 2) {
        poincare_poly family = bundle_total(grassmannian(k + 2, n), grassmannian(k - 1, k + 2));
        p.steps.push_back(surgery_step::blowup("Δ(X)[B]", bundle_total(family, planar), n + k - 4));
    }
    return p;
}

}  // namespace chain

/// Surgery chain for a key, or nullopt for the Kontsevich space (the chain's
/// starting point). No guard or normalization is applied.
inline std::optional<pipeline> build_pipeline(const moduli_key& key) {
    switch (key.comp) {
        case compactification::M:
            return std::nullopt;
        case compactification::S:
            return key.d == 2 ? chain::s2(key.k, key.n) : chain::s3(key.k, key.n);
        case compactification::H:
            if (key.d != 3) throw invalid_parameters(key.to_string() + ": no Hilbert-compactification chain for d = 2");
            return chain::h3(key.k, key.n);
    }
    return std::nullopt;
}

/// Evaluate without guard or normalization. The Kontsevich space has no
/// chain, so both modes return its formula.
inline int_poly evaluate_raw(const moduli_key& key, mode m) {
    if (key.comp == compactification::M) return martin_formula(key.k, key.n, key.d);
    if (m == mode::pipeline) return run_pipeline(*build_pipeline(key)).result.poly();
    if (key.comp == compactification::S) return key.d == 2 ? closed_form::s2(key.k, key.n) : closed_form::s3(key.k, key.n);
    if (key.d != 3) throw invalid_parameters(key.to_string() + ": no Hilbert-compactification formula for d = 2");
    return closed_form::h3(key.k, key.n);
}

/// Guarded evaluation: validates, normalizes to k <= n-k, checks the degree.
inline poincare_poly evaluate(const moduli_key& key, mode m = mode::closed) {
    validate(key);
    const moduli_key nk = key.normalized();
    return poincare_poly(evaluate_raw(nk, m), dim_expected(nk));
}

inline poincare_poly s2(int k, int n, mode m = mode::closed) { return evaluate({k, n, 2, compactification::S}, m); }
inline poincare_poly s3(int k, int n, mode m = mode::closed) { return evaluate({k, n, 3, compactification::S}, m); }
inline poincare_poly h3(int k, int n, mode m = mode::closed) { return evaluate({k, n, 3, compactification::H}, m); }

// ---------------------------------------------------------------------------
// Verification

struct coefficient_diff {
    int index;
    integer closed;
    integer pipeline;
};

inline std::optional<coefficient_diff> first_difference(const int_poly& a, const int_poly& b) {
    const int top = std::max(a.degree(), b.degree());
    for (int j = 0; j <= top; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (a.coeff(ju) != b.coeff(ju)) return coefficient_diff{j, a.coeff(ju), b.coeff(ju)};
    }
    return std::nullopt;
}

struct pair_report {
    moduli_key key;
    std::optional<std::string> error;
    std::string error_kind;  // "invalid_parameters", "non_exact_division", ...
    bool has_pipeline = false;
    bool modes_equal = false;
    bool degree_ok = false;
    bool palindromic = false;
    bool nonnegative = false;
    bool constant_one = false;
    int expected_dim = 0;
    int degree = -1;
    integer euler = 0;
    int_poly closed;
    std::optional<coefficient_diff> difference;

    bool passed() const {
        return !error && (!has_pipeline || modes_equal) && degree_ok && palindromic && nonnegative && constant_one;
    }
};

struct verify_options {
    bool enforce_guard = true;
};

namespace detail {

inline std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const invalid_parameters*>(&e)) return "invalid_parameters";
    if (dynamic_cast<const non_exact_division*>(&e)) return "non_exact_division";
    if (dynamic_cast<const division_by_zero*>(&e)) return "division_by_zero";
    if (dynamic_cast<const negative_betti*>(&e)) return "negative_betti";
    if (dynamic_cast<const dimension_mismatch*>(&e)) return "dimension_mismatch";
    return "error";
}

}  // namespace detail

/// Evaluate a key both ways and report structural checks. Failures are
/// recorded in the report, never thrown.
inline pair_report verify_pair(const moduli_key& key, verify_options opts = {}) {
    pair_report r;
    r.key = key;
    r.expected_dim = dim_expected(key);
    try {
        if (opts.enforce_guard) validate(key);
        r.closed = evaluate_raw(key, mode::closed);
        r.has_pipeline = key.comp != compactification::M;
        if (r.has_pipeline) {
            const int_poly piped = evaluate_raw(key, mode::pipeline);
            r.difference = first_difference(r.closed, piped);
            r.modes_equal = !r.difference;
        }
    } catch (const error& e) {
        r.error = e.what();
        r.error_kind = detail::error_kind(e);
        return r;
    }
    r.degree = r.closed.degree();
    r.degree_ok = r.degree == r.expected_dim;
    r.palindromic = r.closed.is_palindromic();
    r.nonnegative = r.closed.is_nonnegative();
    r.constant_one = r.closed.coeff(0) == 1;
    r.euler = r.closed.evaluate(integer(1));
    return r;
}

enum class suite { duality, pipeline, special, symmetry };

inline const char* to_string(suite s) {
    switch (s) {
        case suite::duality:
            return "duality";
        case suite::pipeline:
            return "pipeline";
        case suite::special:
            return "special";
        case suite::symmetry:
            return "symmetry";
    }
    return "?";
}

inline std::optional<suite> parse_suite(const std::string& s) {
    for (suite x : {suite::duality, suite::pipeline, suite::special, suite::symmetry})
        if (s == to_string(x)) return x;
    return std::nullopt;
}

inline std::set<suite> all_suites() { return {suite::duality, suite::pipeline, suite::special, suite::symmetry}; }

struct check_result {
    suite which;
    std::string subject;  // key or identity being checked
    bool passed = false;
    std::string detail;
    std::string family;  // special suite only: the identity family the check belongs to
};

struct suite_report {
    std::vector<check_result> checks;
    std::vector<std::string> skipped;  // keys rejected by the domain guard

    std::size_t failures() const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [](const check_result& c) { return !c.passed; }));
    }
    std::size_t passes() const { return checks.size() - failures(); }
};

/// Every supported key over k in [k_lo, k_hi], n in [max(k+1, n_lo), n_hi].
/// Rejected keys are returned in `skipped` rather than dropped silently.
struct grid {
    std::vector<moduli_key> keys;
    std::vector<std::string> skipped;
};

inline grid make_grid(int k_lo, int k_hi, int n_lo, int n_hi, bool n_lo_relative_to_k = false) {
    grid g;
    const moduli_key templates[] = {{0, 0, 2, compactification::M},
                                    {0, 0, 3, compactification::M},
                                    {0, 0, 2, compactification::S},
                                    {0, 0, 3, compactification::S},
                                    {0, 0, 3, compactification::H}};
    for (int k = k_lo; k <= k_hi; ++k) {
        const int lo = n_lo_relative_to_k ? k + n_lo : n_lo;
        for (int n = std::max(lo, k + 1); n <= n_hi; ++n) {
            for (moduli_key t : templates) {
                t.k = k;
                t.n = n;
                try {
                    validate(t);
                    g.keys.push_back(t);
                } catch (const invalid_parameters& e) {
                    g.skipped.push_back(e.what());
                }
            }
        }
    }
    std::sort(g.keys.begin(), g.keys.end());
    return g;
}

/// k = 1..4, n = k+1..10.
inline grid default_grid() { return make_grid(1, 4, 1, 10, true); }

namespace detail {

inline std::string describe(const pair_report& r) {
    if (r.error) return *r.error;
    std::string s;
    auto add = [&s](bool ok, const std::string& what) {
        if (!ok) s += (s.empty() ? "" : "; ") + what;
    };
    add(r.degree_ok, "degree " + std::to_string(r.degree) + " != expected " + std::to_string(r.expected_dim));
    add(r.palindromic, "not palindromic");
    add(r.nonnegative, "negative coefficient");
    add(r.constant_one, "constant term != 1");
    return s;
}

inline std::vector<check_result> checks_for_key(const moduli_key& key, const std::set<suite>& suites) {
    std::vector<check_result> out;
    const std::string subject = key.to_string();
    const pair_report rep = verify_pair(key);

    if (suites.count(suite::duality)) {
        const bool ok = !rep.error && rep.degree_ok && rep.palindromic && rep.nonnegative && rep.constant_one;
        out.push_back({suite::duality, subject, ok, ok ? "" : describe(rep)});
    }
    if (suites.count(suite::pipeline) && key.comp != compactification::M) {
        std::string detail;
        if (rep.error) {
            detail = *rep.error;
        } else if (rep.difference) {
            detail = "first difference at q^" + std::to_string(rep.difference->index) + ": closed " +
                     rep.difference->closed.str() + " vs pipeline " + rep.difference->pipeline.str();
        }
        out.push_back({suite::pipeline, subject, !rep.error && rep.modes_equal, detail});
    }
    if (suites.count(suite::symmetry)) {
        const moduli_key dual = key.dual();
        bool ok = false;
        std::string detail;
        try {
            ok = evaluate_raw(key, mode::closed) == evaluate_raw(dual, mode::closed);
            if (key.comp != compactification::M)
                ok = ok && evaluate_raw(key, mode::pipeline) == evaluate_raw(dual, mode::pipeline);
            if (!ok) detail = "differs from " + dual.to_string();
        } catch (const error& e) {
            detail = e.what();
        }
        out.push_back({suite::symmetry, subject + " <-> " + dual.to_string(), ok, detail});
    }
    if (suites.count(suite::special) && key.k == 1) {
        auto identity = [&](const std::string& family, const std::string& name, auto&& lhs, auto&& rhs) {
            try {
                const bool ok = lhs() == rhs();
                out.push_back({suite::special, name, ok, ok ? "" : "identity fails", family});
            } catch (const error& e) {
                out.push_back({suite::special, name, false, e.what(), family});
            }
        };
        if (key.d == 2 && key.comp == compactification::S) {
            if (key.n == 3) {
                identity("conics", "S(Gr(1,3),2) = P^5", [] { return s2(1, 3).poly(); }, [] { return projective(5).poly(); });
            } else {
                const int n = key.n;
                identity(
                    "conics", "S(Gr(1," + std::to_string(n) + "),2) = P^5 x Gr(3," + std::to_string(n) + ")",
                    [n] { return s2(1, n).poly(); },
                    [n] { return bundle_total(grassmannian(3, n), projective(5)).poly(); });
            }
        }
        if (key.d == 3 && key.comp == compactification::H && key.n == 4)
            identity("H = S on P^3", "H(Gr(1,4),3) = S(Gr(1,4),3)", [] { return h3(1, 4).poly(); }, [] { return s3(1, 4).poly(); });
        if (key.d == 3 && key.comp == compactification::S && key.n == 3)
            identity("plane cubics", "S(Gr(1,3),3) = 1+2q+3q^2+3q^3+3q^4+3q^5+3q^6+2q^7+q^8", [] { return s3(1, 3).poly(); },
                     [] { return printed_s_p2_cubics(); });
    }
    return out;
}

}  // namespace detail

/// Run the selected suites over the keys. Keys are processed concurrently;
/// results are ordered by key regardless of completion order.
inline suite_report verify_suite(const std::vector<moduli_key>& keys, const std::set<suite>& suites) {
    std::vector<moduli_key> ordered = keys;
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    suite_report report;
    std::vector<moduli_key> runnable;
    for (const auto& key : ordered) {
        if (is_valid(key))
            runnable.push_back(key);
        else
            report.skipped.push_back(key.to_string());
    }

    std::vector<std::vector<check_result>> results(runnable.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runnable.size(); i = next++)
            results[i] = detail::checks_for_key(runnable[i], suites);
    };
    const std::size_t n_threads =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), runnable.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (auto& r : results)
        report.checks.insert(report.checks.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    return report;
}

}  // namespace curvebetti
