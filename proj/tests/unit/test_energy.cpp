#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracpl/energy.hpp"
#include "fracpl/random.hpp"

using namespace fracpl;

namespace {

constexpr double kPi = std::numbers::pi;

// f(t,u) = pi^2 sin(pi t), F = pi^2 sin(pi t) u.
NonlinearitySpec sine_forcing(const Grid& g) {
    std::vector<double> uu = {-10.0, 0.0, 10.0};
    std::vector<std::vector<double>> ff;
    for (double t : g.nodes) ff.push_back(std::vector<double>(3, kPi * kPi * std::sin(kPi * t)));
    return table_family(g.nodes, uu, ff);
}

GridFunction smooth_random(const Grid& g, Rng& rng, int modes = 6) {
    std::vector<double> c(modes);
    for (auto& x : c) x = rng.normal();
    return sample(g, [&](double t) {
        double s = 0.0;
        for (int j = 0; j < modes; ++j) s += c[j] * std::sin((j + 1) * kPi * t / g.T) / (j + 1);
        return s;
    }, true);
}

GridFunction rough_random(const Grid& g, Rng& rng) {
    GridFunction u = zeros(g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) u[i] = rng.normal();
    return u;
}

GridFunction scaled(const GridFunction& u, double s) {
    GridFunction r = u;
    for (auto& x : r.values) x *= s;
    return r;
}

GridFunction combo(const GridFunction& u, double s, const GridFunction& v) {
    GridFunction r = u;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * v[i];
    return r;
}

double fd_relative_error(const ProblemState& st, const GridFunction& u, const GridFunction& v, double eps) {
    const double fd = (energy(st, combo(u, eps, v)) - energy(st, combo(u, -eps, v))) / (2.0 * eps);
    const double an = pairing(st, gradient(st, u), v);
    return std::abs(fd - an) / std::max(std::abs(an), 1e-300);
}

} // namespace

TEST(Energy, ZeroAtOrigin) {
    const auto g = make_grid(1.0, 64);
    for (const auto& s : {sublinear_power(1.5), superlinear_power(4.0)}) {
        const auto st = make_problem(make_params(0.5, 2.0, 1.0), g, s);
        EXPECT_EQ(energy(st, zeros(g)), 0.0);
    }
}

TEST(Energy, ClassicalExample) {
    const auto g = make_grid(1.0, 512);
    const auto st = make_problem(make_params(1.0, 2.0, 1.0), g, sine_forcing(g));
    const auto u = sample(g, [](double t) { return std::sin(kPi * t); }, true);
    EXPECT_NEAR(energy(st, u), -kPi * kPi / 4.0, 2e-2);
}

TEST(Energy, EvenUnderSymmetricNonlinearity) {
    const auto g = make_grid(1.0, 128);
    Rng rng(6);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto st = make_problem(make_params(0.6, p, 1.0), g, sublinear_power(std::min(1.3, p - 0.1)));
        for (int s = 0; s < 20; ++s) {
            const auto u = s % 2 ? rough_random(g, rng) : smooth_random(g, rng);
            const auto nu = scaled(u, -1.0);
            EXPECT_EQ(energy(st, u), energy(st, nu));
            const auto gu = gradient(st, u), gn = gradient(st, nu);
            for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(gn[i], -gu[i]);
        }
    }
}

TEST(Energy, RequiresDirichlet) {
    const auto g = make_grid(1.0, 32);
    const auto st = make_problem(make_params(0.5, 2.0, 1.0), g, sublinear_power(1.5));
    EXPECT_THROW(energy(st, zeros(g, false)), std::invalid_argument);
    EXPECT_THROW(gradient(st, zeros(g, false)), std::invalid_argument);
}

TEST(Energy, RegularizationOnlyBelowTwo) {
    const auto g = make_grid(1.0, 32);
    EXPECT_EQ(make_problem(make_params(0.5, 2.0, 1.0), g, sublinear_power(1.5)).eps_reg, 0.0);
    EXPECT_EQ(make_problem(make_params(0.5, 3.0, 1.0), g, sublinear_power(1.5)).eps_reg, 0.0);
    EXPECT_EQ(make_problem(make_params(0.5, 1.5, 1.0), g, sublinear_power(1.2)).eps_reg, kDefaultEpsReg);
}

TEST(Gradient, ZeroAtOriginSuperlinear) {
    const auto g = make_grid(1.0, 64);
    const auto st = make_problem(make_params(0.7, 2.0, 1.0), g, superlinear_power(4.0));
    for (double x : gradient(st, zeros(g)).values) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(weak_residual(st, zeros(g)), 0.0);
}

TEST(Gradient, FiniteDifferenceP2) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.6, 2.0, 1.0), g, sublinear_power(1.5));
    Rng rng(12);
    for (int s = 0; s < 100; ++s) {
        const auto u = smooth_random(g, rng), v = smooth_random(g, rng);
        EXPECT_LE(fd_relative_error(st, u, v, 1e-6), 1e-5);
    }
}

TEST(Gradient, FiniteDifferenceP3) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.4, 3.0, 1.0), g, superlinear_power(4.0));
    Rng rng(13);
    for (int s = 0; s < 100; ++s) {
        const auto u = smooth_random(g, rng), v = smooth_random(g, rng);
        EXPECT_LE(fd_relative_error(st, u, v, 1e-6), 1e-4);
    }
}

TEST(Gradient, FiniteDifferenceP15) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.5, 1.5, 1.0), g, sublinear_power(1.2));
    Rng rng(14);
    for (int s = 0; s < 100; ++s) {
        const auto u = smooth_random(g, rng), v = smooth_random(g, rng);
        EXPECT_LE(fd_relative_error(st, u, v, 1e-6), 1e-4);
    }
}

TEST(Gradient, LaplacianPartIsEnergyDerivative) {
    const auto g = make_grid(2.0, 100);
    const auto st = make_problem(make_params(0.3, 2.5, 2.0), g, sublinear_power(1.5));
    Rng rng(15);
    const auto u = smooth_random(g, rng), v = smooth_random(g, rng);
    const double eps = 1e-6;
    const double fd = (laplacian_energy(st, combo(u, eps, v)) - laplacian_energy(st, combo(u, -eps, v))) / (2 * eps);
    const double an = pairing(st, laplacian_gradient(st, u), v);
    EXPECT_NEAR(fd, an, 1e-6 * std::abs(an));
    // <I'(u), u> = p I(u) for the homogeneous part
    EXPECT_NEAR(pairing(st, laplacian_gradient(st, u), u), st.params.p * laplacian_energy(st, u),
                1e-10 * laplacian_energy(st, u));
}

TEST(Gradient, BoundaryEntriesZero) {
    const auto g = make_grid(1.0, 64);
    const auto st = make_problem(make_params(0.5, 2.0, 1.0), g, sublinear_power(1.5));
    Rng rng(1);
    const auto gr = gradient(st, rough_random(g, rng));
    EXPECT_EQ(gr[0], 0.0);
    EXPECT_EQ(gr[64], 0.0);
}

TEST(LaplacianEnergy, Homogeneity) {
    const auto g = make_grid(1.0, 128);
    Rng rng(8);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto st = make_problem(make_params(0.55, p, 1.0), g, sublinear_power(1.2));
        for (int s = 0; s < 20; ++s) {
            const auto u = smooth_random(g, rng);
            const double lam = rng.uniform(-4.0, 4.0);
            const double e = laplacian_energy(st, u);
            EXPECT_NEAR(laplacian_energy(st, scaled(u, lam)), std::pow(std::abs(lam), p) * e,
                        1e-12 * std::pow(std::abs(lam), p) * e);
        }
    }
}

TEST(LaplacianEnergy, MatchesAlphaNorm) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.55, 2.5, 1.0), g, sublinear_power(1.2));
    Rng rng(10);
    const auto u = rough_random(g, rng);
    EXPECT_NEAR(laplacian_energy(st, u), std::pow(alpha_norm(st.ops, u, 2.5), 2.5) / 2.5,
                1e-12 * laplacian_energy(st, u));
}

TEST(WeakResidual, ClassicalSolution) {
    const auto g = make_grid(1.0, 512);
    const auto st = make_problem(make_params(1.0, 2.0, 1.0), g, sine_forcing(g));
    const auto u = sample(g, [](double t) { return std::sin(kPi * t); }, true);
    EXPECT_LE(weak_residual(st, u), 1e-3);
}

TEST(WeakResidual, PositiveAwayFromCriticalPoints) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.6, 2.0, 1.0), g, sublinear_power(1.5));
    Rng rng(21);
    for (int s = 0; s < 10; ++s) EXPECT_GT(weak_residual(st, smooth_random(g, rng)), 1e-3);
    const auto gr = gradient(st, smooth_random(g, rng));
    EXPECT_GT(weak_residual_from_gradient(st, gr), 0.0);
}

TEST(MonotonicityGap, Examples) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.5, 2.0, 1.0), g, sublinear_power(1.5));
    Rng rng(30);
    const auto v = smooth_random(g, rng);
    EXPECT_NEAR(monotonicity_gap(st, v, v), 0.0, 1e-14);
    const double scale = std::pow(alpha_norm(st.ops, v, 2.0), 2);
    EXPECT_NEAR(monotonicity_gap(st, scaled(v, 2.0), v), 0.0, 1e-12 * scale);
}

TEST(MonotonicityGap, NonNegativeOnRandomPairs) {
    const auto g = make_grid(1.0, 64);
    Rng rng(31);
    for (double a : {0.3, 0.7}) {
        for (double p : {1.5, 2.0, 3.0}) {
            const auto st = make_problem(make_params(a, p, 1.0), g, sublinear_power(1.2));
            for (int s = 0; s < 1000; ++s) {
                const auto u = s % 2 ? rough_random(g, rng) : smooth_random(g, rng);
                const auto v = s % 3 ? smooth_random(g, rng) : rough_random(g, rng);
                const double sc = std::pow(alpha_norm(st.ops, u, p), p) + std::pow(alpha_norm(st.ops, v, p), p);
                EXPECT_GE(monotonicity_gap(st, u, v), -1e-12 * (1.0 + sc));
            }
        }
    }
}

TEST(Energy, CoercivitySublinear) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.6, 2.0, 1.0), g, sublinear_power(1.5));
    Rng rng(40);
    const auto u = smooth_random(g, rng);
    const double limit = laplacian_energy(st, u);
    double prev = 1e300;
    for (int k = 1; k <= 10; ++k) {
        const double lam = std::ldexp(1.0, k);
        const double gap = std::abs(energy(st, scaled(u, lam)) / std::pow(lam, 2.0) - limit);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev / limit, 0.05);
}

TEST(Energy, MountainPassGeometrySuperlinear) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.7, 2.0, 1.0), g, superlinear_power(4.0));
    Rng rng(41);
    const double rho = 0.05;
    for (int s = 0; s < 50; ++s) {
        const auto w = s % 2 ? rough_random(g, rng) : smooth_random(g, rng);
        const auto u = scaled(w, rho / alpha_norm(st.ops, w, 2.0));
        EXPECT_GT(energy(st, u), 0.0);
    }
    const auto w = smooth_random(g, rng);
    double prev = 0.0;
    for (int k = 4; k <= 12; ++k) {
        const double e = energy(st, scaled(w, std::ldexp(1.0, k)));
        if (k > 6) EXPECT_LT(e, prev);
        prev = e;
    }
    EXPECT_LT(prev, -1e6);
}

TEST(Precondition, InvertsInteriorNormalOperator) {
    const auto g = make_grid(1.0, 128);
    const auto st = make_problem(make_params(0.5, 2.0, 1.0), g, superlinear_power(4.0));
    Rng rng(50);
    std::vector<double> x(g.n - 1);
    for (auto& v : x) v = rng.normal();
    const auto y = toeplitz_lower(st.ops.deriv_w, st.ops.deriv_scale, x);
    const auto ata = toeplitz_upper(st.ops.deriv_w, st.ops.deriv_scale, y);
    GridFunction in = zeros(g);
    std::copy(ata.begin(), ata.end(), in.values.begin() + 1);
    const auto d = precondition(st, in);
    EXPECT_EQ(d[0], 0.0);
    EXPECT_EQ(d[128], 0.0);
    for (int i = 1; i < g.n; ++i) EXPECT_NEAR(d[i], x[i - 1], 1e-9);
}
