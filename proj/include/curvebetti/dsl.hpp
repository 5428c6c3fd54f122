#pragma once

/**
 * @file dsl.hpp
 * @brief A small language for spaces and surgeries, evaluated to Poincare polynomials.
 *
 *   expr    := term { ("+" | "-") term } ;
 *   term    := factor { "*" factor } ;
 *   factor  := space | "(" expr ")" ;
 *   space   := "P" "(" INT ")" | "WP" "(" INT { "," INT } ")" | "Gr" "(" INT "," INT ")"
 *            | "F1" "(" gr ")" | "F2" "(" gr ")" | "Fx" "(" gr ")" | "MbarP1" "(" INT ")"
 *            | ("M" | "S" | "H") "(" gr "," INT ")"
 *            | "blowup" "(" expr "," expr "," INT ")"
 *            | "blowdown" "(" expr "," expr "," expr ")" ;
 *   gr      := "Gr" "(" INT "," INT ")" ;
 *
 * `*` is the product of spaces (a trivial bundle), `+` a disjoint union and
 * `-` removes a stratum. Integers are nonnegative except inside Gr(...),
 * where a negative k denotes the empty space.
 *
 * Example: `blowup(P(2), P(0), 2) * P(1)` evaluates to (1+q)(1+2q+q^2).
 */

#include <cctype>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "pipelines.hpp"
#include "surgery.hpp"

namespace curvebetti::dsl {

struct node;
using expr = std::shared_ptr<const node>;

enum class fano_kind { lines, planes, lines_through_point };
enum class bin_op { add, sub, mul };

struct proj_node {
    int m;
};
struct wproj_node {
    std::vector<int> weights;
};
struct gr_node {
    int k;
    int n;
};
struct fano_node {
    fano_kind kind;
    gr_node base;
};
struct mbar_p1_node {
    int d;
};
struct moduli_node {
    compactification comp;
    gr_node base;
    int d;
};
struct binary_node {
    bin_op op;
    expr lhs;
    expr rhs;
};
struct blowup_node {
    expr space;
    expr center;
    int codim;
};
struct blowdown_node {
    expr space;
    expr center;
    expr fiber;
};

struct node {
    std::variant<proj_node, wproj_node, gr_node, fano_node, mbar_p1_node, moduli_node, binary_node, blowup_node,
                 blowdown_node>
        value;
};

template <class T>
expr make(T v) {
    return std::make_shared<const node>(node{std::move(v)});
}

inline expr make_binary(bin_op op, expr l, expr r) { return make(binary_node{op, std::move(l), std::move(r)}); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string print_gr(const gr_node& g) { return "Gr(" + std::to_string(g.k) + "," + std::to_string(g.n) + ")"; }

inline bool is_sum(const expr& e) {
    const auto* b = std::get_if<binary_node>(&e->value);
    return b && b->op != bin_op::mul;
}

}  // namespace detail

/// Canonical text; parse(print(e)) reproduces e.
inline std::string print(const expr& e) {
    struct printer {
        std::string operator()(const proj_node& p) const { return "P(" + std::to_string(p.m) + ")"; }
        std::string operator()(const wproj_node& w) const {
            std::string s = "WP(";
            for (std::size_t i = 0; i < w.weights.size(); ++i) s += (i ? "," : "") + std::to_string(w.weights[i]);
            return s + ")";
        }
        std::string operator()(const gr_node& g) const { return detail::print_gr(g); }
        std::string operator()(const fano_node& f) const {
            const char* name = f.kind == fano_kind::lines ? "F1" : f.kind == fano_kind::planes ? "F2" : "Fx";
            return std::string(name) + "(" + detail::print_gr(f.base) + ")";
        }
        std::string operator()(const mbar_p1_node& m) const { return "MbarP1(" + std::to_string(m.d) + ")"; }
        std::string operator()(const moduli_node& m) const {
            return std::string(to_string(m.comp)) + "(" + detail::print_gr(m.base) + "," + std::to_string(m.d) + ")";
        }
        std::string operator()(const binary_node& b) const {
            std::string l = print(b.lhs);
            std::string r = print(b.rhs);
            if (b.op == bin_op::mul) {
                if (detail::is_sum(b.lhs)) l = "(" + l + ")";
                if (detail::is_sum(b.rhs) || std::holds_alternative<binary_node>(b.rhs->value)) r = "(" + r + ")";
                return l + " * " + r;
            }
            if (detail::is_sum(b.rhs)) r = "(" + r + ")";
            return l + (b.op == bin_op::add ? " + " : " - ") + r;
        }
        std::string operator()(const blowup_node& b) const {
            return "blowup(" + print(b.space) + ", " + print(b.center) + ", " + std::to_string(b.codim) + ")";
        }
        std::string operator()(const blowdown_node& b) const {
            return "blowdown(" + print(b.space) + ", " + print(b.center) + ", " + print(b.fiber) + ")";
        }
    };
    return std::visit(printer{}, e->value);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class tok { ident, integer, lparen, rparen, comma, plus, minus, star, end };

struct token {
    tok kind;
    std::string_view text;
    std::size_t offset;
};

class parser {
public:
    explicit parser(std::string_view src) : src_(src) { advance(); }

    expr parse_all() {
        expr e = parse_expr();
        if (cur_.kind != tok::end) fail("operator or end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) const {
        throw parse_error(cur_.offset, expected, cur_.kind == tok::end ? "end of input" : "'" + std::string(cur_.text) + "'");
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            cur_ = {tok::end, {}, start};
            return;
        }
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            cur_ = {tok::ident, src_.substr(start, pos_ - start), start};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            cur_ = {tok::integer, src_.substr(start, pos_ - start), start};
            return;
        }
        ++pos_;
        const std::string_view one = src_.substr(start, 1);
        switch (c) {
            case '(':
                cur_ = {tok::lparen, one, start};
                return;
            case ')':
                cur_ = {tok::rparen, one, start};
                return;
            case ',':
                cur_ = {tok::comma, one, start};
                return;
            case '+':
                cur_ = {tok::plus, one, start};
                return;
            case '-':
                cur_ = {tok::minus, one, start};
                return;
            case '*':
                cur_ = {tok::star, one, start};
                return;
            default:
                throw parse_error(start, "expression", "unexpected character '" + std::string(one) + "'");
        }
    }

    void expect(tok kind, const char* what) {
        if (cur_.kind != kind) fail(what);
        advance();
    }

    int parse_int(bool allow_negative = false) {
        bool negative = false;
        if (allow_negative && cur_.kind == tok::minus) {
            negative = true;
            advance();
        }
        if (cur_.kind != tok::integer) fail(allow_negative ? "integer" : "nonnegative integer");
        long long v = 0;
        for (char ch : cur_.text) {
            v = v * 10 + (ch - '0');
            if (v > std::numeric_limits<int>::max()) fail("integer below 2^31");
        }
        advance();
        return static_cast<int>(negative ? -v : v);
    }

    gr_node parse_gr_args() {
        expect(tok::lparen, "'('");
        const int k = parse_int(true);
        expect(tok::comma, "','");
        const int n = parse_int(true);
        expect(tok::rparen, "')'");
        return {k, n};
    }

    gr_node parse_gr() {
        if (cur_.kind != tok::ident || cur_.text != "Gr") fail("Grassmannian 'Gr(k,n)'");
        advance();
        return parse_gr_args();
    }

    expr parse_expr() {
        expr lhs = parse_term();
        while (cur_.kind == tok::plus || cur_.kind == tok::minus) {
            const bin_op op = cur_.kind == tok::plus ? bin_op::add : bin_op::sub;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    expr parse_term() {
        expr lhs = parse_factor();
        while (cur_.kind == tok::star) {
            advance();
            lhs = make_binary(bin_op::mul, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    expr parse_factor() {
        if (cur_.kind == tok::lparen) {
            advance();
            expr e = parse_expr();
            expect(tok::rparen, "')'");
            return e;
        }
        return parse_space();
    }

    expr parse_space() {
        if (cur_.kind != tok::ident) fail("space or '('");
        const std::string name(cur_.text);
        const std::size_t name_offset = cur_.offset;
        advance();

        if (name == "P") {
            expect(tok::lparen, "'('");
            const int m = parse_int();
            expect(tok::rparen, "')'");
            return make(proj_node{m});
        }
        if (name == "WP") {
            expect(tok::lparen, "'('");
            std::vector<int> w;
            for (;;) {
                const std::size_t at = cur_.offset;
                const int v = parse_int();
                if (v < 1) throw parse_error(at, "positive weight", "0");
                w.push_back(v);
                if (cur_.kind != tok::comma) break;
                advance();
            }
            expect(tok::rparen, "',' or ')'");
            return make(wproj_node{std::move(w)});
        }
        if (name == "Gr") return make(parse_gr_args());
        if (name == "F1" || name == "F2" || name == "Fx") {
            const fano_kind kind = name == "F1"   ? fano_kind::lines
                                   : name == "F2" ? fano_kind::planes
                                                  : fano_kind::lines_through_point;
            expect(tok::lparen, "'('");
            const gr_node g = parse_gr();
            expect(tok::rparen, "')'");
            return make(fano_node{kind, g});
        }
        if (name == "MbarP1") {
            expect(tok::lparen, "'('");
            const int d = parse_int();
            expect(tok::rparen, "')'");
            return make(mbar_p1_node{d});
        }
        if (auto comp = parse_compactification(name)) {
            expect(tok::lparen, "'('");
            const gr_node g = parse_gr();
            expect(tok::comma, "','");
            const int d = parse_int();
            expect(tok::rparen, "')'");
            return make(moduli_node{*comp, g, d});
        }
        if (name == "blowup") {
            expect(tok::lparen, "'('");
            expr space = parse_expr();
            expect(tok::comma, "','");
            expr center = parse_expr();
            expect(tok::comma, "','");
            const int codim = parse_int();
            expect(tok::rparen, "')'");
            return make(blowup_node{std::move(space), std::move(center), codim});
        }
        if (name == "blowdown") {
            expect(tok::lparen, "'('");
            expr space = parse_expr();
            expect(tok::comma, "','");
            expr center = parse_expr();
            expect(tok::comma, "','");
            expr fiber = parse_expr();
            expect(tok::rparen, "')'");
            return make(blowdown_node{std::move(space), std::move(center), std::move(fiber)});
        }
        throw parse_error(name_offset, "space name (P, WP, Gr, F1, F2, Fx, MbarP1, M, S, H, blowup, blowdown)",
                          "'" + name + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    token cur_{tok::end, {}, 0};
};

}  // namespace detail

/// Whitespace-insensitive recursive-descent parse. Throws parse_error with
/// the byte offset of the offending token.
inline expr parse(std::string_view text) { return detail::parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline poincare_poly eval_at(const expr& e, const std::string& path);

struct evaluator {
    const std::string& path;

    poincare_poly operator()(const proj_node& p) const { return projective(p.m); }
    poincare_poly operator()(const wproj_node& w) const { return weighted_projective(std::span<const int>(w.weights)); }
    poincare_poly operator()(const gr_node& g) const { return grassmannian(g.k, g.n); }
    poincare_poly operator()(const fano_node& f) const {
        switch (f.kind) {
            case fano_kind::lines:
                return f1_gr(f.base.k, f.base.n);
            case fano_kind::planes:
                return f2_gr(f.base.k, f.base.n);
            case fano_kind::lines_through_point:
                return fx_gr(f.base.k, f.base.n);
        }
        return {};
    }
    poincare_poly operator()(const mbar_p1_node& m) const { return mbar_p1(m.d); }
    poincare_poly operator()(const moduli_node& m) const {
        return evaluate({m.base.k, m.base.n, m.d, m.comp}, mode::closed);
    }
    poincare_poly operator()(const binary_node& b) const {
        const poincare_poly l = eval_at(b.lhs, path + ".lhs");
        const poincare_poly r = eval_at(b.rhs, path + ".rhs");
        return guarded([&] {
            switch (b.op) {
                case bin_op::add:
                    return union_disjoint(l, r);
                case bin_op::sub:
                    return poincare_poly(l.poly() - r.poly());
                case bin_op::mul:
                    return bundle_total(l, r);
            }
            return poincare_poly{};
        });
    }
    poincare_poly operator()(const blowup_node& b) const {
        const poincare_poly space = eval_at(b.space, path + ".space");
        const poincare_poly center = eval_at(b.center, path + ".center");
        return guarded([&] { return blowup_apply(space, center, b.codim); });
    }
    poincare_poly operator()(const blowdown_node& b) const {
        const poincare_poly space = eval_at(b.space, path + ".space");
        const poincare_poly center = eval_at(b.center, path + ".center");
        const poincare_poly fiber = eval_at(b.fiber, path + ".fiber");
        return guarded([&] { return blowdown_apply(space, center, fiber); });
    }

    template <class F>
    poincare_poly guarded(F&& f) const {
        try {
            return f();
        } catch (error& e) {
            e.add_context("at " + path);
            throw;
        }
    }
};

inline poincare_poly eval_at(const expr& e, const std::string& path) {
    const bool is_leaf = !std::holds_alternative<binary_node>(e->value) &&
                         !std::holds_alternative<blowup_node>(e->value) &&
                         !std::holds_alternative<blowdown_node>(e->value);
    const evaluator ev{path};
    if (!is_leaf) return std::visit(ev, e->value);
    return ev.guarded([&] { return std::visit(ev, e->value); });
}

}  // namespace detail

/// Evaluate to a Poincare polynomial. Moduli leaves use the closed forms.
/// Errors keep their type and gain the AST path of the failing node, e.g.
/// "at $.rhs.center: ...".
inline poincare_poly eval(const expr& e) { return detail::eval_at(e, "$"); }

/// The moduli key when the whole expression is a single moduli leaf.
inline std::optional<moduli_key> as_moduli_key(const expr& e) {
    if (const auto* m = std::get_if<moduli_node>(&e->value)) return moduli_key{m->base.k, m->base.n, m->d, m->comp};
    return std::nullopt;
}

}  // namespace curvebetti::dsl
