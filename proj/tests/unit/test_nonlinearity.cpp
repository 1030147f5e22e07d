#include <cmath>

#include <gtest/gtest.h>

#include "fracpl/errors.hpp"
#include "fracpl/nonlinearity.hpp"
#include "fracpl/random.hpp"

using namespace fracpl;

TEST(Eval, ZeroIsFixed) {
    for (const auto& s : {sublinear_power(1.5), superlinear_power(4.0),
                          sublinear_power(1.2, Coefficient::sinusoidal(2.0, 1.0, 3.0))}) {
        const auto v = eval(s, 0.3, 0.0);
        EXPECT_EQ(v.f, 0.0);
        EXPECT_EQ(v.F, 0.0);
    }
}

TEST(Eval, PowerExamples) {
    const auto a = eval(sublinear_power(1.5), 0.5, 4.0);
    EXPECT_DOUBLE_EQ(a.f, 3.0);
    EXPECT_DOUBLE_EQ(a.F, 8.0);
    const auto b = eval(superlinear_power(4.0), 0.5, -2.0);
    EXPECT_DOUBLE_EQ(b.f, -8.0);
    EXPECT_DOUBLE_EQ(b.F, 4.0);
}

TEST(Eval, AntiderivativeConsistency) {
    Rng rng(17);
    const NonlinearitySpec specs[] = {
        sublinear_power(1.5), sublinear_power(1.8, Coefficient::affine(1.0, 2.0)),
        superlinear_power(3.0), superlinear_power(4.5)};
    for (const auto& s : specs) {
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            const double mag = std::exp(rng.uniform(std::log(1e-1), std::log(1e2)));
            const double u = rng.uniform() < 0.5 ? -mag : mag;
            const double eps = 1e-5 * std::max(1.0, std::abs(u));
            const double fd = (eval(s, t, u + eps).F - eval(s, t, u - eps).F) / (2.0 * eps);
            const double f = eval(s, t, u).f;
            EXPECT_NEAR(fd, f, 1e-6 * std::abs(f)) << "t=" << t << " u=" << u;
        }
    }
}

TEST(Eval, OddnessPairing) {
    Rng rng(23);
    for (const auto& s : {sublinear_power(1.3), superlinear_power(5.0)}) {
        EXPECT_TRUE(is_even(s));
        for (int i = 0; i < 200; ++i) {
            const double t = rng.uniform(0.0, 1.0), u = rng.normal() * 10.0;
            const auto a = eval(s, t, u), b = eval(s, t, -u);
            EXPECT_EQ(b.f, -a.f);
            EXPECT_EQ(b.F, a.F);
        }
    }
}

TEST(Eval, TableBilinearWithExactAntiderivative) {
    // f(t,u) = t + 2u on the table nodes; bilinear interpolation is exact.
    std::vector<double> tt = {0.0, 0.5, 1.0}, uu = {-2.0, -1.0, 0.0, 1.0, 3.0};
    std::vector<std::vector<double>> ff;
    for (double t : tt) {
        std::vector<double> row;
        for (double u : uu) row.push_back(t + 2.0 * u);
        ff.push_back(row);
    }
    const auto s = table_family(tt, uu, ff);
    for (double t : {0.0, 0.2, 0.77, 1.0}) {
        for (double u : {-1.7, -0.3, 0.0, 0.4, 2.9}) {
            const auto v = eval(s, t, u);
            EXPECT_NEAR(v.f, t + 2.0 * u, 1e-14);
            EXPECT_NEAR(v.F, t * u + u * u, 1e-14);
        }
    }
    EXPECT_THROW(eval(s, 0.5, 3.5), ExtrapolationError);
    EXPECT_THROW(eval(s, 0.5, -2.5), ExtrapolationError);
    EXPECT_FALSE(is_even(s));
}

TEST(Eval, DerivativeMatchesFiniteDifference) {
    Rng rng(2);
    for (const auto& s : {sublinear_power(1.5), superlinear_power(4.0)}) {
        for (int i = 0; i < 100; ++i) {
            const double t = rng.uniform(0.0, 1.0), u = rng.uniform(0.1, 5.0) * (i % 2 ? 1 : -1);
            const double eps = 1e-6 * std::abs(u);
            const double fd = (eval(s, t, u + eps).f - eval(s, t, u - eps).f) / (2.0 * eps);
            EXPECT_NEAR(eval_du(s, t, u), fd, 1e-6 * std::abs(fd));
        }
    }
}

TEST(Coefficient, Kinds) {
    EXPECT_EQ(Coefficient::constant(2.5)(0.7), 2.5);
    EXPECT_DOUBLE_EQ(Coefficient::affine(1.0, 2.0)(0.25), 1.5);
    EXPECT_DOUBLE_EQ(Coefficient::sinusoidal(2.0, 1.0, 3.0)(0.5), 2.0 + std::sin(1.5));
    const auto tab = Coefficient::table({0.0, 1.0}, {1.0, 3.0});
    EXPECT_DOUBLE_EQ(tab(0.25), 1.5);
    for (auto k : {Coefficient::Kind::CONSTANT, Coefficient::Kind::AFFINE, Coefficient::Kind::SINUSOIDAL,
                   Coefficient::Kind::TABLE})
        EXPECT_EQ(parse_coefficient_kind(to_string(k)), k);
}

TEST(CheckSpec, RejectsMalformed) {
    EXPECT_THROW(check_spec(sublinear_power(1.0)), std::invalid_argument);
    EXPECT_THROW(check_spec(superlinear_power(0.5)), std::invalid_argument);
    EXPECT_THROW(table_family({0.0, 1.0}, {1.0, 0.0}, {{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(table_family({0.0, 1.0}, {1.0, 2.0}, {{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(table_family({0.0, 1.0}, {-1.0, 0.0}, {{0.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(parse_family("CUBIC"), std::invalid_argument);
    EXPECT_NO_THROW(check_spec(sublinear_power(1.5)));
}

TEST(Hypotheses, SublinearPowerHolds) {
    const auto fp = make_params(0.6, 2.0, 1.0);
    const auto rep = validate_hypotheses(sublinear_power(1.5), fp, Regime::SUBLINEAR, 2000, 1);
    ASSERT_EQ(rep.records.size(), 3u);
    EXPECT_TRUE(rep.all_hold());
    for (const auto& r : rep.records) EXPECT_GE(r.worst_margin, 0.0) << r.id;
}

TEST(Hypotheses, SuperlinearPowerHolds) {
    const auto fp = make_params(0.7, 2.0, 1.0);
    const auto rep = validate_hypotheses(superlinear_power(4.0), fp, Regime::SUPERLINEAR, 2000, 1);
    EXPECT_TRUE(rep.all_hold());
    EXPECT_TRUE(rep.at("S0").holds);
    EXPECT_TRUE(rep.at("S1").holds);
    EXPECT_TRUE(rep.at("S2").holds);
}

TEST(Hypotheses, SuperlinearFailsSublinearRegime) {
    const auto fp = make_params(0.6, 2.0, 1.0);
    const auto rep = validate_hypotheses(superlinear_power(4.0), fp, Regime::SUBLINEAR, 500, 1);
    EXPECT_FALSE(rep.at("f2").holds);
    EXPECT_DOUBLE_EQ(rep.at("f2").worst_margin, -2.0);
    EXPECT_FALSE(rep.all_hold());
}

TEST(Hypotheses, SublinearFailsSuperlinearRegime) {
    const auto fp = make_params(0.6, 2.0, 1.0);
    const auto rep = validate_hypotheses(sublinear_power(1.5), fp, Regime::SUPERLINEAR, 500, 1);
    EXPECT_FALSE(rep.at("S1").holds);
}

TEST(Hypotheses, QMustBeBelowP) {
    const auto fp = make_params(0.6, 1.4, 1.0);
    const auto rep = validate_hypotheses(sublinear_power(1.5), fp, Regime::SUBLINEAR, 200, 1);
    EXPECT_FALSE(rep.at("f1").holds);
}

TEST(Hypotheses, NonEvenTableFailsEvenness) {
    const auto s = table_family({0.0, 1.0}, {-1.0, 0.0, 1.0}, {{-1.0, 0.0, 2.0}, {-1.0, 0.0, 2.0}});
    const auto rep = validate_hypotheses(s, make_params(0.5, 2.0, 1.0), Regime::SUBLINEAR, 500, 3);
    EXPECT_FALSE(rep.at("f3").holds);
}

TEST(Hypotheses, MarginSignMatchesHolds) {
    const auto fp = make_params(0.5, 2.0, 1.0);
    const NonlinearitySpec specs[] = {sublinear_power(1.5), superlinear_power(4.0), superlinear_power(1.5),
                                      sublinear_power(3.0)};
    for (const auto& s : specs) {
        for (auto rg : {Regime::SUBLINEAR, Regime::SUPERLINEAR}) {
            const auto rep = validate_hypotheses(s, fp, rg, 300, 5);
            for (const auto& r : rep.records) EXPECT_EQ(r.worst_margin < 0.0, !r.holds) << r.id;
        }
    }
}

TEST(Hypotheses, Deterministic) {
    const auto fp = make_params(0.5, 2.0, 1.0);
    const auto s = sublinear_power(1.5, Coefficient::sinusoidal(2.0, 1.0, 4.0));
    const auto a = validate_hypotheses(s, fp, Regime::SUBLINEAR, 500, 9);
    const auto b = validate_hypotheses(s, fp, Regime::SUBLINEAR, 500, 9);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].worst_margin, b.records[i].worst_margin);
        EXPECT_EQ(a.records[i].witness_u, b.records[i].witness_u);
    }
    EXPECT_THROW(a.at("S9"), std::invalid_argument);
}
