#include <gtest/gtest.h>

#include <random>

#include "steenrod/exact_binomial.hpp"
#include "steenrod/unstable_action.hpp"
#include "test_rings.hpp"

using namespace steenrod;
using namespace steenrod::test;

namespace {

RingElement mono(const RingBasis& b, Exponents e) { return b.reduce(e); }

SteenrodElement word(Prime p, std::vector<Letter> w) { return SteenrodElement::word(p, w); }

/// Random homogeneous element of A of the given degree: a sum of random
/// letter words, not normalised.
template <class Rng>
SteenrodElement random_operation(Prime p, int degree, Rng& rng)
{
    SteenrodElement e(p);
    const int pd = p.is_two() ? 1 : 2 * static_cast<int>(p.value() - 1);
    for (int t = 0; t < 3; ++t) {
        std::vector<Letter> w;
        int rem = degree;
        while (rem > 0) {
            if (p.is_odd() && (rem % pd != 0 || rng() % 3 == 0)) {
                w.push_back(Letter::beta());
                rem -= 1;
                continue;
            }
            int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(rem / pd));
            w.push_back(Letter::P(s));
            rem -= s * pd;
        }
        e += SteenrodElement::word(p, w).scaled(1 + static_cast<std::uint32_t>(rng() % (p.value() - 1)));
    }
    return e;
}

} // namespace

TEST(Act, TopOperationOnADegreeOneClass)
{
    auto m = faithful_model(1, Prime(2), 8);
    const auto& r = m.ring();
    EXPECT_EQ(act(SteenrodElement::sq({1}), r.generator(0), m), mono(r, {2}));
    EXPECT_TRUE(act(SteenrodElement::sq({1}), mono(r, {2}), m).is_zero());
}

TEST(Act, ReducedPowersOnPolynomialGenerator)
{
    for (std::uint32_t q : {3u, 5u}) {
        Prime p(q);
        const int cap = 2 * (8 + 8 * static_cast<int>(q - 1));
        ActionTable t(polynomial_ring(q, 2, cap));
        const auto& r = t.ring();
        for (int m = 0; m <= 8; ++m)
            for (int i = 0; i <= m; ++i) {
                auto v = act(word(p, {Letter::P(i)}), r.reduce(Exponents{m}), t);
                auto c = static_cast<std::uint32_t>(exact_binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(i)) % q);
                EXPECT_EQ(v, r.reduce(Exponents{m + i * static_cast<int>(q - 1)}).scaled(c)) << "m=" << m << " i=" << i;
            }
    }
}

TEST(Act, SquareOfADegreeSixteenClass)
{
    // F_2[y4, x] / (y4^2) with Sq^4 x = x y4
    RingPresentation pres{Prime(2), {{"y4", 4}, {"x", 16}}, {monomial({2, 0})}, 40};
    ActionTable t(RingBasis::compute(pres));
    const auto& r = t.ring();
    t.set("x", Letter::sq(4), mono(r, {1, 1}));
    t.set("x", Letter::sq(8), r.zero(24));
    t.set("x", Letter::sq(12), r.zero(28));
    auto x = r.generator(1);
    auto sq4x = act(SteenrodElement::sq({4}), x, t);
    EXPECT_EQ(act(SteenrodElement::sq({8}), r.multiply(x, x), t), r.multiply(sq4x, sq4x));
}

TEST(FaithfulModel, Examples)
{
    auto m3 = faithful_model(1, Prime(3), 10);
    EXPECT_EQ(act(word(Prime(3), {Letter::beta()}), m3.ring().generator(0), m3), m3.ring().generator(1));

    auto m2 = faithful_model(2, Prime(2), 10);
    const auto& r = m2.ring();
    EXPECT_EQ(act(SteenrodElement::sq({1}), mono(r, {1, 1}), m2), mono(r, {2, 1}) + mono(r, {1, 2}));
}

TEST(FaithfulModel, AdemExamplesAgreeWithTheAction)
{
    auto m = faithful_model(4, Prime(2), 16);
    ActionEvaluator ev(m);
    std::vector<std::pair<SteenrodElement, SteenrodElement>> cases{
        {SteenrodElement::sq({1, 1}), SteenrodElement::zero(Prime(2))},
        {SteenrodElement::sq({2, 2}), SteenrodElement::sq({3, 1})},
        {SteenrodElement::sq({2, 4}), SteenrodElement::sq({6}) + SteenrodElement::sq({5, 1})},
    };
    for (const auto& [lhs, rhs] : cases)
        for (int d = 0; d + lhs.degree().value() <= 16; ++d)
            for (std::size_t i = 0; i < m.ring().dimension(d); ++i) {
                auto b = RingElement::basis_vector(Prime(2), d, static_cast<std::uint32_t>(i));
                auto l = ev.act(lhs, b);
                auto rr = rhs.is_zero() ? m.ring().zero(l.degree()) : ev.act(rhs, b);
                ASSERT_EQ(l, rr) << lhs.to_string() << " on " << m.ring().to_string(b);
            }

    Prime p(3);
    auto odd = faithful_model(3, p, 16);
    ActionEvaluator ev3(odd);
    auto lhs = word(p, {Letter::P(1), Letter::P(1)});
    auto rhs = word(p, {Letter::P(2)}).scaled(2);
    for (int d = 0; d + 8 <= 16; ++d)
        for (std::size_t i = 0; i < odd.ring().dimension(d); ++i) {
            auto b = RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i));
            ASSERT_EQ(ev3.act(lhs, b), ev3.act(rhs, b));
        }
}

TEST(ActionTable, RejectsInvalidEntries)
{
    ActionTable t(candidate_ring(48));
    const auto& r = t.ring();
    auto x = *r.generator_index("x");
    EXPECT_THROW(t.set(x, Letter::sq(4), r.zero(24)), std::invalid_argument);
    EXPECT_THROW(t.set(x, Letter::sq(1), RingElement::basis_vector(Prime(2), 17, 0)), std::invalid_argument);
    EXPECT_THROW(t.set("y4", Letter::sq(4), r.generator(*r.generator_index("y8"))), std::invalid_argument);
    EXPECT_NO_THROW(t.set("y4", Letter::sq(4), r.zero(8)));
    EXPECT_NO_THROW(t.set("y4", Letter::sq(5), r.zero(9)));
    EXPECT_THROW(t.set("x", Letter::beta(), r.zero(17)), std::invalid_argument);
    EXPECT_THROW(t.set("nope", Letter::sq(1), r.zero(1)), std::invalid_argument);
    EXPECT_TRUE(t.entries().empty());
}

TEST(ActionTable, MissingValuesNameTheGeneratorAndOperation)
{
    ActionTable t(candidate_ring(48));
    auto x = t.ring().generator(*t.ring().generator_index("x"));
    try {
        act(SteenrodElement::sq({4}), x, t);
        FAIL() << "expected MissingActionValue";
    } catch (const MissingActionValue& e) {
        EXPECT_EQ(e.generator(), "x");
        EXPECT_EQ(e.operation(), "Sq^4");
    }
    // Sq^1 x lands in the zero group H^17
    EXPECT_TRUE(act(SteenrodElement::sq({1}), x, t).is_zero());
    EXPECT_THROW(act(SteenrodElement::sq({40}), x, t), DegreeOverflow);
}

TEST(Coherence, FaithfulModelsAreCoherent)
{
    auto r2 = check_adem_coherence(faithful_model(2, Prime(2), 20), 20);
    EXPECT_TRUE(r2.passed()) << r2.violations.front().relation;
    EXPECT_GT(r2.checks, 0u);
    auto r3 = check_adem_coherence(faithful_model(2, Prime(3), 24), 24, 3);
    EXPECT_TRUE(r3.passed()) << r3.violations.front().relation;
}

TEST(Coherence, ReportIsIndependentOfWorkerCount)
{
    // a table that is not coherent: Sq^4 x = x y4 alone, with y4^2 = 0
    RingPresentation pres{Prime(2), {{"y4", 4}, {"x", 16}}, {monomial({2, 0})}, 40};
    ActionTable t(RingBasis::compute(pres));
    const auto& r = t.ring();
    t.set("x", Letter::sq(4), r.reduce(Exponents{1, 1}));
    t.set("x", Letter::sq(8), r.zero(24));
    t.set("x", Letter::sq(12), r.zero(28));
    auto a = check_adem_coherence(t, 40, 1);
    auto b = check_adem_coherence(t, 40, 4);
    ASSERT_FALSE(a.passed());
    ASSERT_EQ(a.violations.size(), b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        EXPECT_EQ(a.violations[i].relation, b.violations[i].relation);
        EXPECT_EQ(a.violations[i].element, b.violations[i].element);
        EXPECT_EQ(a.violations[i].lhs, b.violations[i].lhs);
    }
    EXPECT_EQ(a.checks, b.checks);
}

TEST(Coherence, RelationNotPreservedIsReported)
{
    // t^2 = 0 with Sq^1 t = s^3 forces Sq^2(t^2) = s^6, which is not zero
    RingPresentation pres{Prime(2), {{"s", 1}, {"t", 2}}, {monomial({0, 2})}, 8};
    ActionTable tb(RingBasis::compute(pres));
    tb.set("t", Letter::sq(1), tb.ring().reduce(Exponents{3, 0}));
    auto rep = check_adem_coherence(tb, 8);
    bool relation_kind = false;
    for (const auto& v : rep.violations)
        relation_kind = relation_kind || v.kind == "relation";
    EXPECT_TRUE(relation_kind);
}

TEST(ImageAudit, Examples)
{
    ActionTable f(polynomial_ring(2, 8, 48));
    EXPECT_TRUE(steenrod_image_audit(f, f.ring().generator(0)).passed());

    auto m = faithful_model(1, Prime(2), 16);
    auto t2 = mono(m.ring(), {2});
    auto audit = steenrod_image_audit(m, t2);
    ASSERT_FALSE(audit.passed());
    EXPECT_EQ(audit.witnesses[0].target, "x");
    EXPECT_EQ(audit.witnesses[0].op, Letter::sq(1));
    EXPECT_EQ(audit.witnesses[0].y, m.ring().generator(0));
}

// ------------------------------------------------------------------ properties

TEST(ActionProperties, LinearityAndCartan)
{
    std::mt19937 rng(17);
    for (std::uint32_t q : {2u, 3u}) {
        Prime p(q);
        auto m = faithful_model(3, p, 18);
        const auto& r = m.ring();
        ActionEvaluator ev(m);
        for (int trial = 0; trial < 60; ++trial) {
            int da = 1 + static_cast<int>(rng() % 4), db = 1 + static_cast<int>(rng() % 4);
            auto a = random_element(r, da, rng), a2 = random_element(r, da, rng), b = random_element(r, db, rng);
            const int k = static_cast<int>(rng() % 4);
            const Letter op = p.is_two() ? Letter::sq(k) : Letter::P(k % 2);
            EXPECT_EQ(ev.apply(op, a + a2), ev.apply(op, a) + ev.apply(op, a2));

            RingElement cartan = r.zero(da + db + letter_degree(op, p));
            for (int i = 0; i <= op.power; ++i)
                cartan += r.multiply(ev.apply(Letter{false, i}, a), ev.apply(Letter{false, op.power - i}, b));
            EXPECT_EQ(ev.apply(op, r.multiply(a, b)), cartan);

            if (p.is_odd()) {
                auto lhs = ev.apply(Letter::beta(), r.multiply(a, b));
                auto rhs = r.multiply(ev.apply(Letter::beta(), a), b) +
                           r.multiply(a, ev.apply(Letter::beta(), b)).scaled(p.sign(da));
                EXPECT_EQ(lhs, rhs);
                EXPECT_TRUE(ev.apply(Letter::beta(), ev.apply(Letter::beta(), a)).is_zero());
            }
        }
    }
}

TEST(ActionProperties, UnstableVanishingBelowExcess)
{
    for (std::uint32_t q : {2u, 3u}) {
        Prime p(q);
        auto m = faithful_model(3, p, 24);
        ActionEvaluator ev(m);
        for (int s = 1; s <= 20; ++s)
            for (const auto& mono_op : admissible_basis(s, p)) {
                const int ex = excess(mono_op);
                for (int d = 0; d < ex && d + s <= 24; ++d)
                    for (std::size_t i = 0; i < m.ring().dimension(d); ++i)
                        ASSERT_TRUE(ev.act(mono_op, RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i)))
                                        .is_zero())
                            << mono_op.to_string() << " on degree " << d;
            }
    }
}

TEST(ActionProperties, NormalFormZeroIffActionZero)
{
    // zero normal form => zero action, on random unnormalised words
    std::mt19937 rng(23);
    for (std::uint32_t q : {2u, 3u}) {
        Prime p(q);
        auto m = faithful_model(3, p, 22);
        ActionEvaluator ev(m);
        int zeros = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const int s = 2 + static_cast<int>(rng() % 12);
            auto e = random_operation(p, s, rng);
            auto n = normalize(e);
            // e - n has zero normal form
            auto diff = e - n;
            ASSERT_TRUE(normalize(diff).is_zero());
            zeros += n.is_zero();
            for (int d = 0; d + s <= 22; d += 3)
                for (std::size_t i = 0; i < m.ring().dimension(d); i += 7) {
                    auto b = RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i));
                    ASSERT_TRUE((ev.act(e, b) - ev.act(n, b)).is_zero()) << e.to_string();
                }
        }
    }
    // nonzero normal forms are detected by some class within the cap, as long
    // as every monomial has room above its excess
    for (std::uint32_t q : {2u, 3u}) {
        Prime p(q);
        const int cap = 24;
        auto m = faithful_model(3, p, cap);
        ActionEvaluator ev(m);
        const auto& r = m.ring();
        for (int s = 1; s < cap; ++s) {
            auto basis = admissible_basis(s, p);
            for (int trial = 0; trial < 10; ++trial) {
                SteenrodElement e(p);
                for (const auto& mono_op : basis)
                    if (2 * excess(mono_op) + s <= cap && rng() % 2)
                        e.add_term(mono_op, 1 + static_cast<std::uint32_t>(rng() % (q - 1)));
                if (e.is_zero())
                    continue;
                bool detected = false;
                for (int d = 0; !detected && d + s <= cap; ++d)
                    for (std::size_t i = 0; !detected && i < r.dimension(d); ++i)
                        detected = !ev.act(e, RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i))).is_zero();
                EXPECT_TRUE(detected) << e.to_string();
            }
        }
    }
}
