#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracpl/grid.hpp"
#include "fracpl/random.hpp"

using namespace fracpl;

TEST(MakeGrid, UniformNodes) {
    const Grid g = make_grid(1.0, 4);
    ASSERT_EQ(g.size(), 5u);
    const double expect[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i <= 4; ++i) EXPECT_DOUBLE_EQ(g.nodes[i], expect[i]);
    EXPECT_DOUBLE_EQ(make_grid(2.0, 2).h, 1.0);
}

TEST(MakeGrid, RejectsDegenerate) {
    EXPECT_THROW(make_grid(1.0, 1), std::invalid_argument);
    EXPECT_THROW(make_grid(0.0, 8), std::invalid_argument);
    EXPECT_THROW(make_grid(-1.0, 8), std::invalid_argument);
}

TEST(MakeGrid, Invariants) {
    for (int n : {2, 3, 7, 100, 1000}) {
        const Grid g = make_grid(3.7, n);
        EXPECT_EQ(g.nodes.front(), 0.0);
        EXPECT_EQ(g.nodes.back(), 3.7);
        EXPECT_NEAR(g.h * n, 3.7, 1e-14);
        for (int i = 1; i <= n; ++i) EXPECT_GT(g.nodes[i], g.nodes[i - 1]);
    }
}

TEST(FracParams, ConjugateExponent) {
    for (double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
        const auto fp = make_params(0.5, p, 1.0);
        EXPECT_NEAR(1.0 / p + 1.0 / fp.q_conj, 1.0, 1e-15);
    }
}

TEST(FracParams, Rejects) {
    EXPECT_THROW(make_params(0.0, 2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(make_params(1.2, 2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(make_params(0.5, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(make_params(0.5, 2.0, 0.0), std::invalid_argument);
    EXPECT_NO_THROW(make_params(1.0, 2.0, 1.0));
}

TEST(LpNorm, Examples) {
    const Grid g = make_grid(1.0, 1024);
    EXPECT_EQ(lp_norm(zeros(g), 2.0, g), 0.0);
    const auto one = sample(g, [](double) { return 1.0; });
    for (double p : {1.0, 1.5, 2.0, 7.0}) EXPECT_NEAR(lp_norm(one, p, g), 1.0, 1e-14);
    const auto lin = sample(g, [](double t) { return t; });
    EXPECT_NEAR(lp_norm(lin, 2.0, g), 1.0 / std::sqrt(3.0), 1e-4);
}

TEST(LpNorm, RejectsSmallP) {
    const Grid g = make_grid(1.0, 8);
    EXPECT_THROW(lp_norm(zeros(g), 0.5, g), std::invalid_argument);
}

TEST(SupNorm, Examples) {
    const Grid g = make_grid(1.0, 64);
    EXPECT_EQ(sup_norm(zeros(g)), 0.0);
    EXPECT_DOUBLE_EQ(sup_norm(sample(g, [](double t) { return std::sin(std::numbers::pi * t); })), 1.0);
    EXPECT_DOUBLE_EQ(sup_norm(sample(g, [](double t) { return t - 0.5; })), 0.5);
}

TEST(LpNorm, NormAxioms) {
    const Grid g = make_grid(1.0, 200);
    Rng rng(7);
    for (int s = 0; s < 200; ++s) {
        GridFunction u = zeros(g, false), v = zeros(g, false);
        for (std::size_t i = 0; i < g.size(); ++i) {
            u[i] = rng.normal();
            v[i] = rng.normal();
        }
        const double p = rng.uniform(1.0, 6.0);
        const double lam = rng.uniform(-5.0, 5.0);
        GridFunction lu = u, sum = u;
        for (std::size_t i = 0; i < g.size(); ++i) {
            lu[i] *= lam;
            sum[i] += v[i];
        }
        const double nu = lp_norm(u, p, g);
        EXPECT_NEAR(lp_norm(lu, p, g), std::abs(lam) * nu, 1e-12 * std::abs(lam) * nu);
        EXPECT_LE(lp_norm(sum, p, g), nu + lp_norm(v, p, g) + 1e-12);
    }
}

TEST(LpNorm, InterpolationBound) {
    const Grid g = make_grid(1.0, 256);
    const auto w = trapezoid_weights(g);
    Rng rng(11);
    for (int s = 0; s < 200; ++s) {
        GridFunction u = zeros(g);
        for (std::size_t i = 1; i + 1 < g.size(); ++i) u[i] = rng.normal();
        const double p = rng.uniform(1.0, 4.0);
        const double q = p + rng.uniform(0.0, 6.0);
        double sp = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sp += w[i] * std::pow(std::abs(u[i]), p);
            sq += w[i] * std::pow(std::abs(u[i]), q);
        }
        EXPECT_LE(sq, std::pow(sup_norm(u), q - p) * sp * (1.0 + 1e-10));
    }
}

TEST(LpNorm, SecondOrderConvergence) {
    auto err = [](int n) {
        const Grid g = make_grid(1.0, n);
        const auto u = sample(g, [](double t) { return std::exp(t); });
        // int_0^1 e^{2t} dt = (e^2 - 1)/2
        return std::abs(std::pow(lp_norm(u, 2.0, g), 2) - 0.5 * (std::exp(2.0) - 1.0));
    };
    for (int n : {32, 64, 128}) EXPECT_NEAR(err(2 * n) / err(n), 0.25, 0.01);
}

TEST(GridFunction, DirichletCheck) {
    const Grid g = make_grid(1.0, 8);
    GridFunction u = zeros(g);
    EXPECT_NO_THROW(check_dirichlet(u));
    u[0] = 1e-300;
    EXPECT_THROW(check_dirichlet(u), std::invalid_argument);
    EXPECT_THROW(check_dirichlet(zeros(g, false)), std::invalid_argument);
    const auto s = sample(g, [](double) { return 3.0; }, true);
    EXPECT_EQ(s[0], 0.0);
    EXPECT_EQ(s[8], 0.0);
    EXPECT_EQ(s[4], 3.0);
}
