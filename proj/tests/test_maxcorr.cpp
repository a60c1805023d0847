#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ribbonkit/maxcorr.hpp"
#include "test_helpers.hpp"

using namespace ribbonkit;

TEST(RhoM, DsbsClosedForm) {
    for (double a : {0.0, 0.1, 0.25, 0.4, 0.5, 0.7, 1.0}) {
        EXPECT_NEAR(rho_m(dsbs(a)).value, std::abs(1.0 - 2.0 * a), 1e-10) << a;
    }
}

TEST(RhoM, AgreesWithPowerIteration) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t nx = 2 + trial % 3, ny = 2 + (trial / 3) % 3;
        const auto t = oracle::random_table(gen, nx, ny);
        EXPECT_NEAR(rho_m(JointDist::validate(t)).value, oracle::rho_m(t), 1e-8);
    }
}

TEST(RhoM, BinaryFormulaAgrees) {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto t = oracle::random_table(gen, 2, 2 + trial % 3);
        const auto d = JointDist::validate(t);
        EXPECT_NEAR(rho_m_binary_formula(d), rho_m(d).value, 1e-10);
    }
    EXPECT_CODE(rho_m_binary_formula(JointDist::validate(oracle::random_table(gen, 3, 3))), NotBinary);
}

TEST(RhoM, BruteForceAgrees) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = JointDist::validate(oracle::random_table(gen, 3, 3));
        const auto bf = rho_m_bruteforce(d);
        EXPECT_NEAR(bf.value, rho_m(d).value, 1e-6);
        ASSERT_TRUE(bf.witness);
        EXPECT_NEAR(correlation(d, bf.witness->f, bf.witness->g), bf.value, 1e-9);
    }
}

TEST(RhoM, WitnessIsStandardizedAndAttains) {
    std::mt19937_64 gen(14);
    const auto d = JointDist::validate(oracle::random_table(gen, 3, 4));
    const auto r = rho_m(d);
    ASSERT_TRUE(r.witness);
    const auto& f = r.witness->f;
    const auto& g = r.witness->g;
    double mf = 0, vf = 0, mg = 0, vg = 0;
    for (std::size_t x = 0; x < d.nx(); ++x) {
        mf += d.px()[x] * f[x];
        vf += d.px()[x] * f[x] * f[x];
    }
    for (std::size_t y = 0; y < d.ny(); ++y) {
        mg += d.py()[y] * g[y];
        vg += d.py()[y] * g[y] * g[y];
    }
    EXPECT_NEAR(mf, 0.0, 1e-12);
    EXPECT_NEAR(mg, 0.0, 1e-12);
    EXPECT_NEAR(vf, 1.0, 1e-12);
    EXPECT_NEAR(vg, 1.0, 1e-12);
    EXPECT_NEAR(correlation(d, f, g), r.value, 1e-12);
}

TEST(RhoM, IndependentIsZero) {
    const auto d = JointDist::validate({{0.06, 0.24}, {0.14, 0.56}});
    EXPECT_NEAR(rho_m(d).value, 0.0, 1e-12);
}

TEST(RhoM, DegenerateSideIsZero) {
    const auto d = JointDist::validate({{0.3, 0.7}});
    const auto r = rho_m(d);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_FALSE(r.witness);
}

TEST(RhoM, ValueLiesInUnitInterval) {
    std::mt19937_64 gen(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = rho_m(JointDist::validate(oracle::random_table(gen, 2 + trial % 3, 2 + trial % 2)));
        EXPECT_GE(r.value, 0.0);
        EXPECT_LE(r.value, 1.0);
        EXPECT_FALSE(r.overshoot);
    }
}

TEST(RhoM, TensorizesToTheMaximum) {
    std::mt19937_64 gen(16);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = JointDist::validate(oracle::random_table(gen, 2, 3));
        const auto b = JointDist::validate(oracle::random_table(gen, 2, 2));
        const double expected = std::max(oracle::rho_m(oracle::Table{{a(0, 0), a(0, 1), a(0, 2)}, {a(1, 0), a(1, 1), a(1, 2)}}),
                                         oracle::rho_m(oracle::Table{{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}}));
        EXPECT_NEAR(rho_m(tensor(a, b)).value, expected, 1e-8);
    }
}

TEST(RhoM, DiscontinuousAtTheBoundary) {
    for (double n : {2.0, 10.0, 100.0}) {
        const auto d = JointDist::validate({{1.0 / n, 0.0}, {0.0, 1.0 - 1.0 / n}});
        EXPECT_NEAR(rho_m(d).value, 1.0, 1e-12) << n;
    }
    const auto limit = JointDist::validate({{0.0, 0.0}, {0.0, 1.0}});
    EXPECT_EQ(limit.nx(), 1u);
    EXPECT_EQ(rho_m(limit).value, 0.0);
}

TEST(RhoM, BruteForceBudget) {
    std::mt19937_64 gen(17);
    const auto big = JointDist::validate(oracle::random_table(gen, 9, 9));
    EXPECT_CODE(rho_m_bruteforce(big), OutOfRange);
    SearchConfig tight;
    tight.max_iters = 1;
    EXPECT_CODE(rho_m_bruteforce(JointDist::validate(oracle::random_table(gen, 3, 3)), tight), BudgetExceeded);
}
