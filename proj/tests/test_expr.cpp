#include <gtest/gtest.h>

#include <random>

#include "steenrod/expr.hpp"

using namespace steenrod;

namespace {

const Prime two(2);
const Prime three(3);

bool same_sum(const ExprSum& a, const ExprSum& b);

bool same_factor(const ExprFactor& a, const ExprFactor& b)
{
    if (a.kind != b.kind)
        return false;
    if (a.kind == ExprFactor::Kind::Group)
        return same_sum(*a.group, *b.group);
    return a.kind == ExprFactor::Kind::Bockstein || a.exponent == b.exponent;
}

/// Structural equality, ignoring source spans.
bool same_sum(const ExprSum& a, const ExprSum& b)
{
    if (a.terms.size() != b.terms.size())
        return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const ExprTerm& s = a.terms[i];
        const ExprTerm& t = b.terms[i];
        if (s.negated != t.negated || s.coefficient != t.coefficient || s.factors.size() != t.factors.size())
            return false;
        for (std::size_t j = 0; j < s.factors.size(); ++j)
            if (!same_factor(s.factors[j], t.factors[j]))
                return false;
    }
    return true;
}

ParseError error_of(const std::string& text, Prime p)
{
    try {
        parse_expression(text, p);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for " << text;
    return ParseError(ParseError::Kind::Syntax, {}, "");
}

SteenrodElement word(Prime p, std::initializer_list<Letter> letters)
{
    const std::vector<Letter> v(letters);
    return SteenrodElement::word(p, v);
}

} // namespace

TEST(Parse, TwoTermSum)
{
    const SteenrodExpr e = parse_expression("Sq^4 Sq^8 + Sq^12", two);
    ASSERT_EQ(e.root.terms.size(), 2u);
    EXPECT_EQ(e.root.terms[0].factors.size(), 2u);
    EXPECT_EQ(evaluate(e), SteenrodElement::sq({4, 8}) + SteenrodElement::sq({12}));
}

TEST(Parse, InterleavedWordAtThree)
{
    const SteenrodExpr e = parse_expression("P^1 b P^2", three);
    ASSERT_EQ(e.root.terms.size(), 1u);
    EXPECT_EQ(e.root.terms[0].factors.size(), 3u);
    EXPECT_EQ(evaluate(e), word(three, {Letter::P(1), Letter::beta(), Letter::P(2)}));
    EXPECT_EQ(parse_element("bP^1", three), word(three, {Letter::beta(), Letter::P(1)}));
}

TEST(Parse, IdentityCanonicalizedAway)
{
    EXPECT_EQ(parse_element("Sq^0", two), SteenrodElement::identity(two));
    EXPECT_EQ(print(normalize(parse_element("Sq^0 Sq^2 Sq^0", two))), "Sq^2");
    EXPECT_EQ(print(parse_element("Sq^0", two)), "Sq^0");
    EXPECT_EQ(print(parse_element("P^0", three)), "P^0");
}

TEST(Parse, Coefficients)
{
    EXPECT_TRUE(parse_element("4 Sq^1", two).is_zero());
    EXPECT_TRUE(parse_element("Sq^1 - Sq^1", two).is_zero());
    EXPECT_EQ(parse_element("Sq^1 - Sq^2", two), parse_element("Sq^1 + Sq^2", two));
    EXPECT_EQ(parse_element("P^1 - 2 P^1", three), parse_element("2 P^1", three));
    EXPECT_EQ(parse_element("7 b", three), parse_element("b", three));
    EXPECT_TRUE(parse_element("0", three).is_zero());
    EXPECT_TRUE(parse_element(" 000 ", two).is_zero());
}

TEST(Parse, Grouping)
{
    EXPECT_EQ(parse_element("(Sq^1 + Sq^2) Sq^1", two), SteenrodElement::sq({1, 1}) + SteenrodElement::sq({2, 1}));
    EXPECT_EQ(parse_element("2 (P^1 + b)(b)", three),
              word(three, {Letter::P(1), Letter::beta()}).scaled(2) + word(three, {Letter::beta(), Letter::beta()}).scaled(2));
    EXPECT_EQ(print(parse_expression("Sq^1 (Sq^2 - Sq^3)", two)), "Sq^1 (Sq^2 - Sq^3)");
}

TEST(Parse, SpansTrackLinesAndColumns)
{
    const SteenrodExpr e = parse_expression("Sq^1\n  + Sq^2 Sq^3", two);
    ASSERT_EQ(e.root.terms.size(), 2u);
    const ExprFactor& f = e.root.terms[1].factors[1];
    EXPECT_EQ(f.span.line, 2);
    EXPECT_EQ(f.span.column, 10);
    EXPECT_EQ(f.span.length, 4);
}

TEST(ParseErrors, Lexical)
{
    const ParseError star = error_of("Sq^1 * Sq^2", two);
    EXPECT_EQ(star.kind(), ParseError::Kind::Lexical);
    EXPECT_EQ(star.where().column, 6);
    const ParseError beta = error_of("P^1 \xce\xb2", three);
    EXPECT_EQ(beta.kind(), ParseError::Kind::Lexical);
    EXPECT_NE(std::string(beta.what()).find("write b"), std::string::npos);
}

TEST(ParseErrors, SyntaxCarriesExpectedTokens)
{
    const ParseError e = error_of("Sq 2", two);
    EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(e.where().line, 1);
    EXPECT_EQ(e.where().column, 4);
    EXPECT_EQ(e.expected(), std::vector<std::string>{"'^'"});

    const ParseError open = error_of("(Sq^1", two);
    EXPECT_EQ(open.expected(), (std::vector<std::string>{"'('", "')'", "'+'", "'-'", "'Sq'"}));

    const ParseError tail = error_of("Sq^1 +\n  Sq^", two);
    EXPECT_EQ(tail.where().line, 2);
    EXPECT_EQ(tail.where().column, 6);
    EXPECT_EQ(tail.expected(), std::vector<std::string>{"number"});
    EXPECT_EQ(std::string(tail.what()), "2:6: syntax error: expected number, got end of input");

    EXPECT_EQ(error_of("", two).expected(), (std::vector<std::string>{"'('", "'Sq'"}));
    EXPECT_EQ(error_of("-P^1", three).expected(), (std::vector<std::string>{"'('", "'P'", "'b'"}));
    EXPECT_EQ(error_of("Sq^1)", two).kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(error_of("3", two).kind(), ParseError::Kind::Syntax);
}

TEST(ParseErrors, Semantic)
{
    for (const auto& [text, p] : std::vector<std::pair<std::string, Prime>>{
             {"Sq^1", three}, {"P^1", two}, {"b", two}, {"Sq^-1", two}, {"P^1234567", three}}) {
        SCOPED_TRACE(text);
        EXPECT_EQ(error_of(text, p).kind(), ParseError::Kind::Semantic);
    }
    EXPECT_EQ(error_of("Sq^2 P^1", two).where().column, 6);
}

TEST(RoundTrip, GoldenCorpus)
{
    const std::vector<std::pair<std::string, Prime>> corpus = {
        {"Sq^2 Sq^2", two},
        {"Sq^4 Sq^8 + Sq^12", two},
        {"Sq^3 Sq^1 + Sq^2 Sq^1 Sq^1", two},
        {"(Sq^1 + Sq^2)(Sq^2 + Sq^1) Sq^4", two},
        {"Sq^0", two},
        {"0", two},
        {"3 Sq^5 Sq^2 - Sq^7", two},
        {"Sq^1 Sq^2 Sq^1 Sq^2 Sq^1", two},
        {"P^1 b P^2", three},
        {"P^1 P^1", three},
        {"b P^3 b + 2 P^3", three},
        {"P^1 b P^1 - b P^2", three},
        {"2 (P^2 + b P^1 b) P^3", three},
        {"b b", three},
        {"P^0", three},
        {"P^1 P^5", Prime(5)},
        {"4 b P^2 P^1 + P^3", Prime(5)},
    };
    for (const auto& [s, p] : corpus) {
        SCOPED_TRACE(s);
        const SteenrodExpr a = parse_expression(s, p);
        const SteenrodExpr b = parse_expression(print(a), p);
        EXPECT_TRUE(same_sum(a.root, b.root)) << print(a) << " vs " << print(b);
        EXPECT_EQ(evaluate(a), evaluate(b));

        // Canonical forms are fixed points of parse then print.
        const std::string canonical = print(normalize(evaluate(a)));
        EXPECT_EQ(print(normalize(parse_element(canonical, p))), canonical);
        EXPECT_EQ(parse_element(canonical, p), normalize(evaluate(a)));
    }
}

TEST(RoundTrip, RandomExpressions)
{
    std::mt19937 rng(20240611);
    for (const Prime p : {two, three, Prime(5)}) {
        for (int trial = 0; trial < 300; ++trial) {
            std::string s;
            const int terms = 1 + static_cast<int>(rng() % 3);
            for (int t = 0; t < terms; ++t) {
                if (t)
                    s += rng() % 2 ? " + " : " - ";
                if (rng() % 3 == 0)
                    s += std::to_string(rng() % 10) + " ";
                const int factors = 1 + static_cast<int>(rng() % 3);
                for (int f = 0; f < factors; ++f) {
                    if (f)
                        s += " ";
                    if (p.is_two())
                        s += "Sq^" + std::to_string(rng() % 9);
                    else if (rng() % 3 == 0)
                        s += "b";
                    else
                        s += "P^" + std::to_string(rng() % 4);
                }
            }
            SCOPED_TRACE(s);
            const SteenrodExpr a = parse_expression(s, p);
            EXPECT_TRUE(same_sum(a.root, parse_expression(print(a), p).root));
            const SteenrodElement n = normalize(evaluate(a));
            EXPECT_EQ(parse_element(print(n), p), n);
        }
    }
}
