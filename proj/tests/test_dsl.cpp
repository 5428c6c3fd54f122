#include <gtest/gtest.h>

#include <random>

#include <curvebetti/dsl.hpp>

#include "test_support.hpp"

using namespace curvebetti;
using testing_support::poly;

TEST(Parse, Grassmannian) {
    const auto e = dsl::parse("Gr(2,4)");
    const auto* g = std::get_if<dsl::gr_node>(&e->value);
    ASSERT_NE(g, nullptr);
    EXPECT_EQ(g->k, 2);
    EXPECT_EQ(g->n, 4);
    EXPECT_EQ(dsl::eval(e).poly(), poly({1, 1, 2, 1, 1}));
}

TEST(Parse, BlowupOfPlaneAtPoint) {
    const auto e = dsl::parse("blowup(P(2), P(0), 2)");
    EXPECT_TRUE(std::holds_alternative<dsl::blowup_node>(e->value));
    EXPECT_EQ(dsl::eval(e).poly(), poly({1, 2, 1}));
    EXPECT_EQ(dsl::print(e), "blowup(P(2), P(0), 2)");
}

TEST(Parse, MissingCommaReportsOffset) {
    try {
        dsl::parse("Gr(2 4)");
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_EQ(e.expected(), "','");
        EXPECT_EQ(e.found(), "'4'");
    }
}

TEST(Parse, ErrorsAtEndOfInput) {
    try {
        dsl::parse("P(2) *");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.offset(), 6u);
        EXPECT_EQ(e.found(), "end of input");
    }
    EXPECT_THROW(dsl::parse(""), parse_error);
    EXPECT_THROW(dsl::parse("P(2))"), parse_error);
    EXPECT_THROW(dsl::parse("Q(2)"), parse_error);
    EXPECT_THROW(dsl::parse("P(-1)"), parse_error);
    EXPECT_THROW(dsl::parse("WP(1,0)"), parse_error);
    EXPECT_THROW(dsl::parse("P(2) # P(1)"), parse_error);
    EXPECT_THROW(dsl::parse("P(99999999999)"), parse_error);
    EXPECT_THROW(dsl::parse("S(P(2),3)"), parse_error);
}

TEST(Parse, WhitespaceInsensitive) {
    EXPECT_EQ(dsl::print(dsl::parse("  S ( Gr ( 1 , 3 ) , 3 )\n")), "S(Gr(1,3),3)");
    EXPECT_EQ(dsl::print(dsl::parse("P(1)*P(2)+P(0)")), "P(1) * P(2) + P(0)");
}

TEST(Parse, NegativeIndexOnlyInsideGrassmannian) {
    EXPECT_TRUE(dsl::eval(dsl::parse("Gr(-1,3)")).is_empty());
    EXPECT_THROW(dsl::parse("MbarP1(-2)"), parse_error);
}

TEST(Eval, ProductOfProjectiveSpaces) { EXPECT_EQ(dsl::eval(dsl::parse("P(2) * P(1)")).poly(), poly({1, 2, 2, 1})); }

TEST(Eval, Precedence) {
    // P(0) + P(1) * P(1) = 1 + (1 + 2q + q^2)
    EXPECT_EQ(dsl::eval(dsl::parse("P(0) + P(1) * P(1)")).poly(), poly({2, 2, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("(P(0) + P(1)) * P(1)")).poly(), poly({2, 3, 1}));
    // subtraction is left-associative
    EXPECT_THROW(dsl::eval(dsl::parse("P(3) - P(1) - P(0)")), negative_betti);
    EXPECT_EQ(dsl::eval(dsl::parse("P(3) - (P(1) - P(0))")).poly(), poly({1, 0, 1, 1}));
}

TEST(Eval, ModuliLeavesUseClosedForms) {
    EXPECT_EQ(dsl::eval(dsl::parse("S(Gr(1,3),3)")).poly(), poly({1, 2, 3, 3, 3, 3, 3, 2, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("M(Gr(1,3),2)")).poly(), poly({1, 2, 3, 3, 2, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("H(Gr(1,4),3)")), dsl::eval(dsl::parse("S(Gr(1,4),3)")));
    EXPECT_THROW(dsl::eval(dsl::parse("H(Gr(1,3),3)")), invalid_parameters);
    EXPECT_THROW(dsl::eval(dsl::parse("S(Gr(1,4),4)")), invalid_parameters);
}

TEST(Eval, CatalogLeaves) {
    EXPECT_EQ(dsl::eval(dsl::parse("WP(1,2,2,3,3)")).poly(), poly({1, 1, 1, 1, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("F1(Gr(2,4))")).poly(), poly({1, 2, 3, 3, 2, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("F2(Gr(2,4))")).components(), 2);
    EXPECT_EQ(dsl::eval(dsl::parse("Fx(Gr(2,4))")).poly(), poly({1, 2, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("MbarP1(3)")).poly(), poly({1, 1, 2, 1, 1}));
    EXPECT_EQ(dsl::eval(dsl::parse("blowdown(blowup(P(2), P(0), 2), P(0), P(1))")), projective(2));
}

TEST(Eval, ErrorsNameTheFailingNode) {
    try {
        dsl::eval(dsl::parse("P(4) + P(1) - blowdown(P(1), P(0), P(2))"));
        FAIL();
    } catch (const negative_betti& e) {
        EXPECT_EQ(std::string(e.what()).rfind("at $.rhs: ", 0), 0u) << e.what();
    }
    try {
        dsl::eval(dsl::parse("P(1) * blowup(P(3), P(1), 3)"));
        FAIL();
    } catch (const dimension_mismatch& e) {
        EXPECT_EQ(std::string(e.what()).rfind("at $.rhs: ", 0), 0u) << e.what();
    }
    try {
        dsl::eval(dsl::parse("P(1) * blowup(P(3), MbarP1(5), 1)"));
        FAIL();
    } catch (const invalid_parameters& e) {
        EXPECT_EQ(std::string(e.what()).rfind("at $.rhs.center: ", 0), 0u) << e.what();
    }
    EXPECT_THROW(dsl::eval(dsl::parse("P(0) - P(1)")), negative_betti);
}

TEST(AsModuliKey, OnlyForBareModuliLeaf) {
    const auto key = dsl::as_moduli_key(dsl::parse("S(Gr(2,5),3)"));
    ASSERT_TRUE(key.has_value());
    EXPECT_EQ(*key, (moduli_key{2, 5, 3, compactification::S}));
    EXPECT_FALSE(dsl::as_moduli_key(dsl::parse("S(Gr(2,5),3) * P(0)")).has_value());
}

// Random ASTs over leaves that always evaluate.
class DslProperties : public ::testing::Test {
protected:
    std::mt19937 rng{424242};

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    dsl::expr random_leaf() {
        switch (pick(0, 6)) {
            case 0:
                return dsl::make(dsl::proj_node{pick(0, 4)});
            case 1: {
                std::vector<int> w(static_cast<std::size_t>(pick(1, 4)));
                for (auto& x : w) x = pick(1, 3);
                return dsl::make(dsl::wproj_node{w});
            }
            case 2: {
                const int n = pick(1, 6);
                return dsl::make(dsl::gr_node{pick(-1, n + 1), n});
            }
            case 3: {
                const int n = pick(2, 6);
                return dsl::make(dsl::fano_node{static_cast<dsl::fano_kind>(pick(0, 2)), {pick(1, n - 1), n}});
            }
            case 4:
                return dsl::make(dsl::mbar_p1_node{pick(2, 3)});
            case 5: {
                const int n = pick(4, 6);
                return dsl::make(dsl::moduli_node{compactification::S, {pick(1, n - 1), n}, pick(2, 3)});
            }
            default:
                return dsl::make(dsl::blowup_node{dsl::make(dsl::proj_node{3}), dsl::make(dsl::proj_node{1}), 2});
        }
    }

    dsl::expr random_tree(int depth) {
        if (depth == 0 || pick(0, 3) == 0) return random_leaf();
        const auto op = pick(0, 1) ? dsl::bin_op::add : dsl::bin_op::mul;
        return dsl::make_binary(op, random_tree(depth - 1), random_tree(depth - 1));
    }
};

TEST_F(DslProperties, PrintParseRoundTrip) {
    for (int trial = 0; trial < 300; ++trial) {
        auto e = random_tree(4);
        if (pick(0, 4) == 0) e = dsl::make(dsl::blowdown_node{e, dsl::make(dsl::proj_node{0}), random_leaf()});
        if (pick(0, 4) == 0) e = dsl::make_binary(dsl::bin_op::sub, e, random_tree(2));
        const std::string text = dsl::print(e);
        const auto reparsed = dsl::parse(text);
        ASSERT_EQ(dsl::print(reparsed), text);
    }
}

TEST_F(DslProperties, ProductCommutes) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_tree(2);
        const auto b = random_tree(2);
        ASSERT_EQ(dsl::eval(dsl::make_binary(dsl::bin_op::mul, a, b)),
                  dsl::eval(dsl::make_binary(dsl::bin_op::mul, b, a)));
    }
}

TEST_F(DslProperties, SumIsAssociativeAndCommutative) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_tree(2);
        const auto b = random_tree(2);
        const auto c = random_tree(2);
        using dsl::bin_op;
        const auto left = dsl::make_binary(bin_op::add, dsl::make_binary(bin_op::add, a, b), c);
        const auto right = dsl::make_binary(bin_op::add, a, dsl::make_binary(bin_op::add, b, c));
        ASSERT_EQ(dsl::eval(left), dsl::eval(right));
        ASSERT_EQ(dsl::eval(dsl::make_binary(bin_op::add, a, b)), dsl::eval(dsl::make_binary(bin_op::add, b, a)));
        // textual form agrees with the AST
        ASSERT_EQ(dsl::eval(dsl::parse(dsl::print(left))), dsl::eval(left));
    }
}
