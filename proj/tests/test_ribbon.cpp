#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ribbonkit/maxcorr.hpp"
#include "ribbonkit/ribbon.hpp"
#include "test_helpers.hpp"

using namespace ribbonkit;

namespace {

oracle::Table as_table(const JointDist& d) {
    oracle::Table t(d.nx(), std::vector<double>(d.ny()));
    for (std::size_t x = 0; x < d.nx(); ++x)
        for (std::size_t y = 0; y < d.ny(); ++y) t[x][y] = d(x, y);
    return t;
}

double sq(double v) { return v * v; }

}  // namespace

TEST(PNorm, Examples) {
    const std::vector<double> half{0.5, 0.5};
    for (double p : {-3.0, -1.0, 0.0, 0.5, 2.0, 7.0}) EXPECT_NEAR(p_norm(std::vector<double>{3.0, 3.0}, half, p), 3.0, 1e-14);
    EXPECT_EQ(p_norm(std::vector<double>{2.0, 0.0}, half, -1.0), 0.0);
    EXPECT_EQ(p_norm(std::vector<double>{2.0, 0.0}, half, 0.0), 0.0);
    EXPECT_NEAR(p_norm(std::vector<double>{4.0, 1.0}, half, 0.0), 2.0, 1e-14);
    // Zero-weight entries are ignored, even zeros at negative p.
    EXPECT_NEAR(p_norm(std::vector<double>{2.0, 0.0}, std::vector<double>{1.0, 0.0}, -1.0), 2.0, 1e-14);
}

TEST(PNorm, AgreesWithDefinition) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(4), w(4);
        double s = 0.0;
        for (int i = 0; i < 4; ++i) {
            v[i] = u(gen) * (i % 2 ? -1.0 : 1.0);
            w[i] = u(gen);
            s += w[i];
        }
        for (double& x : w) x /= s;
        for (double p : {-4.0, -1.0, -0.3, 0.0, 0.4, 1.0, 2.5, 9.0})
            EXPECT_NEAR(p_norm(v, w, p), oracle::p_norm(v, w, p), 1e-12 * oracle::p_norm(v, w, p)) << p;
    }
}

TEST(PNorm, NondecreasingInP) {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(5), w(5);
        double s = 0.0;
        for (int i = 0; i < 5; ++i) {
            v[i] = u(gen);
            w[i] = u(gen);
            s += w[i];
        }
        for (double& x : w) x /= s;
        double prev = 0.0;
        for (double p : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0}) {
            const double n = p_norm(v, w, p);
            EXPECT_GE(n, prev * (1.0 - 1e-14)) << p;
            prev = n;
        }
    }
}

TEST(PNorm, ExtremeExponentsStayFinite) {
    const std::vector<double> v{1e-200, 1e200}, w{0.5, 0.5};
    EXPECT_TRUE(std::isfinite(p_norm(v, w, 50.0)));
    EXPECT_TRUE(std::isfinite(p_norm(v, w, -50.0)));
}

TEST(HolderConjugate, Examples) {
    EXPECT_EQ(holder_conjugate(2.0), 2.0);
    EXPECT_EQ(holder_conjugate(0.0), 0.0);
    EXPECT_EQ(holder_conjugate(-1.0), 0.5);
    EXPECT_NEAR(holder_conjugate(holder_conjugate(3.7)), 3.7, 1e-14);
    EXPECT_CODE(holder_conjugate(1.0), ConjugateOfOne);
}

TEST(CondExp, Examples) {
    const auto d = dsbs(0.2);
    const auto ce = cond_exp(d, std::vector<double>{1.0, 0.0});
    EXPECT_NEAR(ce[0], 0.8, 1e-15);
    EXPECT_NEAR(ce[1], 0.2, 1e-15);
    for (double v : cond_exp(d, std::vector<double>{2.5, 2.5})) EXPECT_NEAR(v, 2.5, 1e-15);
    const auto ind = JointDist::validate({{0.12, 0.18, 0.3}, {0.08, 0.12, 0.2}});
    const std::vector<double> g{1.0, -2.0, 5.0};
    const double mean = 0.2 * 1.0 + 0.3 * -2.0 + 0.5 * 5.0;
    for (double v : cond_exp(ind, g)) EXPECT_NEAR(v, mean, 1e-14);
    EXPECT_CODE(cond_exp(d, std::vector<double>{1.0}), ShapeMismatch);
}

TEST(RibbonSlack, AgreesWithDefinition) {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = oracle::random_table(gen, 3, 3);
        const auto d = JointDist::validate(t);
        const std::vector<double> g{u(gen), u(gen), u(gen)};
        for (auto [p, q] : {std::pair{2.0, 1.5}, {4.0, 1.0}, {0.5, 0.7}, {-2.0, 0.3}, {0.0, 0.5}})
            EXPECT_NEAR(ribbon_slack(d, p, q, g), oracle::ribbon_slack(t, p, q, g), 1e-12) << p << " " << q;
    }
}

TEST(IsHypercontractive, DsbsExamples) {
    const auto d = dsbs(0.25);
    EXPECT_EQ(is_hypercontractive(d, 2.0, 1.25).status, Verdict::PassNumerical);
    const auto fail = is_hypercontractive(d, 2.0, 1.2);
    ASSERT_EQ(fail.status, Verdict::FailWitnessed);
    ASSERT_TRUE(fail.witness_g);
    EXPECT_LT(oracle::ribbon_slack(as_table(d), 2.0, 1.2, *fail.witness_g), -kWitnessMargin);
    EXPECT_NEAR(p_norm(*fail.witness_g, d.py(), 1.2), 1.0, 1e-12);
    EXPECT_EQ(is_hypercontractive(d, -1.0, 0.5).status, Verdict::PassNumerical);
}

TEST(IsHypercontractive, ReverseWitnessReevaluates) {
    const auto d = dsbs(0.25);
    // Reverse boundary at p = 0.5 is q = 1 - 0.25 * 0.5 = 0.875; q = 0.95 lies outside.
    const auto v = is_hypercontractive(d, 0.5, 0.95);
    ASSERT_EQ(v.status, Verdict::FailWitnessed);
    for (double g : *v.witness_g) EXPECT_GT(g, 0.0);
    EXPECT_LT(oracle::ribbon_slack(as_table(d), 0.5, 0.95, *v.witness_g), -kWitnessMargin);
}

TEST(IsHypercontractive, EqualExponentsPass) {
    std::mt19937_64 gen(24);
    const auto d = JointDist::validate(oracle::random_table(gen, 3, 3));
    for (double p : {-2.0, 0.5, 3.0}) EXPECT_EQ(is_hypercontractive(d, p, p).status, Verdict::PassNumerical);
}

TEST(IsHypercontractive, RejectsProbesOutsideBothWedges) {
    const auto d = dsbs(0.1);
    EXPECT_CODE(is_hypercontractive(d, 2.0, 3.0), RegimeError);
    EXPECT_CODE(is_hypercontractive(d, 2.0, 0.5), RegimeError);
    EXPECT_CODE(is_hypercontractive(d, 0.5, 1.5), RegimeError);
    EXPECT_CODE(is_hypercontractive(d, 0.5, 0.2), RegimeError);
    EXPECT_CODE(is_hypercontractive(d, 1.0, 1.0 - 1e-3), RegimeError);
}

TEST(IsHypercontractive, PassRespectsMaximalCorrelation) {
    std::mt19937_64 gen(25);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = JointDist::validate(oracle::random_table(gen, 2, 3));
        const double r2 = sq(rho_m(d).value);
        for (double p : {2.0, 0.5}) {
            for (double s : {0.2, 0.5, 0.8}) {
                const double q = 1.0 + s * (p - 1.0);
                if (is_hypercontractive(d, p, q).status == Verdict::PassNumerical) {
                    EXPECT_GE(s, r2 - 1e-6);
                }
            }
        }
    }
}

TEST(IsHypercontractive, DualityUnderTransposition) {
    std::mt19937_64 gen(26);
    for (int trial = 0; trial < 6; ++trial) {
        const auto d = JointDist::validate(oracle::random_table(gen, 2, 3));
        const auto t = d.transpose();
        for (auto [p, q] : {std::pair{2.0, 1.3}, {3.0, 1.8}, {0.5, 0.8}, {-1.0, 0.4}}) {
            const auto a = is_hypercontractive(d, p, q);
            const auto b = is_hypercontractive(t, holder_conjugate(q), holder_conjugate(p));
            if (a.status == Verdict::FailWitnessed) {
                EXPECT_LT(b.slack, 1e-6);
            }
            if (b.status == Verdict::FailWitnessed) {
                EXPECT_LT(a.slack, 1e-6);
            }
        }
    }
}

TEST(QStar, DsbsExamples) {
    const auto d = dsbs(0.3);
    const auto fwd = q_star(d, 2.0);
    EXPECT_TRUE(fwd.bracket.contains(1.16, 1e-9));
    EXPECT_LE(fwd.bracket.width(), 1e-4);
    EXPECT_EQ(fwd.bracket.kind, BracketKind::WitnessLoSearchHi);
    const auto rev = q_star(d, 0.5);
    EXPECT_TRUE(rev.bracket.contains(0.92, 1e-9));
    EXPECT_EQ(rev.bracket.kind, BracketKind::WitnessHiSearchLo);
    ASSERT_TRUE(rev.witness_q);
    EXPECT_NEAR(*rev.witness_q, rev.bracket.hi, 1e-12);
    EXPECT_CODE(q_star(d, 1.0), RegimeError);
}

TEST(QStar, IndependentIsTrivial) {
    const auto d = JointDist::validate({{0.12, 0.18}, {0.28, 0.42}});
    const auto b = q_star(d, 3.0);
    EXPECT_NEAR(b.bracket.lo, 1.0, 1e-4);
    EXPECT_NEAR(b.bracket.hi, 1.0, 1e-4);
}

TEST(SP, DsbsIsConstantInP) {
    for (double a : {0.1, 0.25, 0.4}) {
        for (double p : {-4.0, -1.0, 0.5, 1.5, 2.0, 4.0}) {
            const auto b = s_p(dsbs(a), p).bracket;
            const double truth = sq(1.0 - 2.0 * a);
            EXPECT_TRUE(b.contains(truth)) << a << " " << p << " [" << b.lo << ", " << b.hi << "]";
            EXPECT_LE(b.width(), 1e-4);
        }
    }
}

TEST(SP, CertifiedEndReevaluates) {
    const auto d = dsbs(0.3);
    for (double p : {-4.0, 2.0}) {
        const auto b = s_p(d, p);
        ASSERT_TRUE(b.witness_q);
        EXPECT_NEAR(*b.witness_q, 1.0 + b.bracket.lo * (p - 1.0), 1e-12);
        EXPECT_LT(oracle::ribbon_slack(as_table(d), p, *b.witness_q, b.witness_g), -kWitnessMargin);
    }
}

TEST(SP, BracketInUnitIntervalAndAboveRhoSquared) {
    std::mt19937_64 gen(27);
    for (int trial = 0; trial < 12; ++trial) {
        const auto d = JointDist::validate(oracle::random_table(gen, 2 + trial % 2, 2 + trial % 2));
        const double r2 = sq(rho_m(d).value);
        for (double p : {-2.0, 0.5, 2.0, 4.0}) {
            const auto b = s_p(d, p).bracket;
            EXPECT_GE(b.lo, 0.0);
            EXPECT_LE(b.hi, 1.0);
            EXPECT_LE(b.lo, b.hi);
            EXPECT_GE(b.hi, r2 - 1e-6) << p;
        }
    }
}

TEST(SP, Tensorizes) {
    std::mt19937_64 gen(28);
    for (int trial = 0; trial < 3; ++trial) {
        const auto a = JointDist::validate(oracle::random_table(gen, 2, 2));
        const auto b = JointDist::validate(oracle::random_table(gen, 2, 2));
        const auto ab = tensor(a, b);
        for (double p : {2.0, 0.5}) {
            const auto ba = s_p(a, p).bracket, bb = s_p(b, p).bracket, bt = s_p(ab, p).bracket;
            const double lo = std::max(ba.lo, bb.lo), hi = std::max(ba.hi, bb.hi);
            EXPECT_LE(bt.lo, hi + 1e-4) << p;
            EXPECT_GE(bt.hi, lo - 1e-4) << p;
        }
    }
}

TEST(SP, MergingOutputsDoesNotIncrease) {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 4; ++trial) {
        const auto t = oracle::random_table(gen, 2, 3);
        const auto merged = JointDist::validate({{t[0][0] + t[0][1], t[0][2]}, {t[1][0] + t[1][1], t[1][2]}});
        const auto full = JointDist::validate(t);
        for (double p : {2.0, -1.0}) EXPECT_LE(s_p(merged, p).bracket.lo, s_p(full, p).bracket.hi + 1e-5) << p;
    }
}

TEST(SP, DeterministicForFixedSeed) {
    std::mt19937_64 gen(30);
    const auto d = JointDist::validate(oracle::random_table(gen, 3, 3));
    SearchConfig cfg;
    cfg.seed = 42;
    const auto a = s_p(d, 2.0, 1e-5, cfg), b = s_p(d, 2.0, 1e-5, cfg);
    EXPECT_EQ(a.bracket.lo, b.bracket.lo);
    EXPECT_EQ(a.bracket.hi, b.bracket.hi);
    EXPECT_EQ(a.witness_g, b.witness_g);
}

TEST(TwoFunctionCheck, ReverseViolationOnThreePointTarget) {
    const auto q = JointDist::validate({{0.0, 1.0}, {1.0, 1.0}});
    const double alpha = 0.2;
    // p' = q = 2 alpha, i.e. p = 2 alpha / (2 alpha - 1).
    const double pp = 2.0 * alpha, p = pp / (pp - 1.0);
    const std::vector<double> lam{1.0, 1e-9};
    const double slack = two_function_check(q, lam, lam, p, pp, Direction::Reverse);
    EXPECT_GT(slack, 0.0);
    const double lhs = 1e-9 * 2.0 / 3.0 + 1e-18 / 3.0;
    const double rhs = oracle::p_norm(lam, {1.0 / 3.0, 2.0 / 3.0}, pp) * oracle::p_norm(lam, {1.0 / 3.0, 2.0 / 3.0}, pp);
    EXPECT_NEAR(slack, rhs - lhs, 1e-12);
}

TEST(TwoFunctionCheck, ConstantsGiveEquality) {
    const auto d = JointDist::validate({{0.1, 0.2}, {0.3, 0.4}});
    const std::vector<double> c{2.0, 2.0};
    EXPECT_NEAR(two_function_check(d, c, c, 3.0, 1.5, Direction::Forward), 0.0, 1e-12);
    EXPECT_NEAR(two_function_check(d, c, c, 0.5, 0.7, Direction::Reverse), 0.0, 1e-12);
}

TEST(TwoFunctionCheck, HolderAtEqualExponents) {
    const auto d = dsbs(0.2);
    for (auto [lam, mu] : {std::pair{std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 0.0}},
                           {std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}}})
        for (double p : {1.5, 2.0, 4.0}) EXPECT_LE(two_function_check(d, lam, mu, p, p, Direction::Forward), 1e-15);
}

TEST(TwoFunctionCheck, ReverseNeedsPositiveWeights) {
    const auto d = dsbs(0.2);
    EXPECT_CODE(two_function_check(d, std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0}, 0.5, 0.7,
                                   Direction::Reverse),
                NonPositiveWeights);
}
