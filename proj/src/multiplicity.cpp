#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "detail.hpp"
#include "fracpl/errors.hpp"
#include "fracpl/random.hpp"
#include "fracpl/solvers.hpp"

namespace fracpl {

namespace {

double phi_prime(const ProblemState& st, double s) {
    const double p = st.params.p;
    if (p == 2.0) return 1.0;
    if (st.eps_reg > 0.0) {
        const double e2 = st.eps_reg * st.eps_reg;
        return std::pow(s * s + e2, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + e2);
    }
    return (p - 1.0) * std::pow(std::abs(s), p - 2.0);
}

class NewtonSystem {
public:
    explicit NewtonSystem(const ProblemState& st) : st_(st) {
        const int m = st.grid.n + 1;
        L_ = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j) L_(i, j) = st.ops.deriv_scale * st.ops.deriv_w[i - j];
    }

    // Interior Jacobian of the gradient.
    Eigen::MatrixXd jacobian(const GridFunction& u) const {
        const int n = st_.grid.n;
        const auto du = left_derivative(st_, u);
        Eigen::VectorXd d(n + 1);
        for (int i = 0; i <= n; ++i) d(i) = st_.ops.norm_w[i] * phi_prime(st_, du[i]) / st_.grid.h;
        const auto Li = L_.block(0, 1, n + 1, n - 1);
        Eigen::MatrixXd J = Li.transpose() * d.asDiagonal() * Li;
        for (int j = 1; j < n; ++j) J(j - 1, j - 1) -= eval_du(st_.spec, st_.grid.nodes[j], u[j]);
        return J;
    }

    GridFunction newton_step(const GridFunction& u, const GridFunction& g) const {
        const int n = st_.grid.n;
        Eigen::VectorXd rhs(n - 1);
        for (int j = 1; j < n; ++j) rhs(j - 1) = -g[j];
        const Eigen::VectorXd x = jacobian(u).partialPivLu().solve(rhs);
        GridFunction out = zeros(st_.grid);
        for (int j = 1; j < n; ++j) out[j] = x(j - 1);
        return out;
    }

private:
    const ProblemState& st_;
    Eigen::MatrixXd L_;
};

double anorm(const ProblemState& st, const GridFunction& v) {
    return alpha_norm(st.ops, v, st.params.p);
}

// d/ds ||v + s d||_{alpha,p} at s = 0
double anorm_dir(const ProblemState& st, const GridFunction& v, const GridFunction& d) {
    const double p = st.params.p;
    const auto dv = left_derivative(st, v);
    const auto dd = left_derivative(st, d);
    double s = 0.0;
    for (std::size_t i = 0; i < dv.size(); ++i)
        if (dv[i] != 0.0) s += st.ops.norm_w[i] * std::copysign(std::pow(std::abs(dv[i]), p - 1.0), dv[i]) * dd[i];
    return s / std::pow(anorm(st, v), p - 1.0);
}

double log_deflation(const ProblemState& st, const GridFunction& u, const std::vector<GridFunction>& sols) {
    const double p = st.params.p;
    double s = 0.0;
    for (const auto& v : sols)
        for (double sg : {1.0, -1.0}) s += std::log1p(std::pow(anorm(st, detail::axpy(u, -sg, v)), -p));
    return s;
}

double log_deflation_dir(const ProblemState& st, const GridFunction& u,
                         const std::vector<GridFunction>& sols, const GridFunction& d) {
    const double p = st.params.p;
    double s = 0.0;
    for (const auto& v : sols)
        for (double sg : {1.0, -1.0}) {
            const GridFunction w = detail::axpy(u, -sg, v);
            const double N = anorm(st, w);
            s += -p * std::pow(N, -p - 1.0) / (1.0 + std::pow(N, -p)) * anorm_dir(st, w, d);
        }
    return s;
}

// Damped Newton on the gradient, deflated against +-sols.
GridFunction deflated_newton(const ProblemState& st, const NewtonSystem& sys, GridFunction u,
                             const std::vector<GridFunction>& sols, double tol, int max_iter, int& iters) {
    for (iters = 0; iters < max_iter; ++iters) {
        const GridFunction g = gradient(st, u);
        const double r = weak_residual_from_gradient(st, g);
        if (r <= tol) return u;
        GridFunction d = sys.newton_step(u, g);
        double merit0 = r;
        if (!sols.empty()) {
            const double denom = 1.0 - log_deflation_dir(st, u, sols, d);
            if (std::isfinite(denom) && denom != 0.0) d = detail::scaled(d, 1.0 / denom);
            merit0 *= std::exp(log_deflation(st, u, sols));
        }
        double s = 1.0;
        GridFunction un = u;
        while (s > 1e-8) {
            un = detail::axpy(u, s, d);
            double m1 = weak_residual(st, un);
            if (!sols.empty()) m1 *= std::exp(log_deflation(st, un, sols));
            if (m1 < (1.0 - 1e-4 * s) * merit0) break;
            s *= 0.5;
        }
        u = std::move(un);
    }
    return u;
}

GridFunction seed_direction(const ProblemState& st, int mode, Rng& rng) {
    std::vector<double> c(mode + 1, 0.0);
    c[mode] = 1.0;
    for (int i = 1; i < mode; ++i) c[i] += 0.3 * rng.normal();
    const double T = st.grid.T;
    GridFunction w = sample(
        st.grid,
        [&](double t) {
            double acc = 0.0;
            for (int i = 1; i <= mode; ++i) acc += c[i] * std::sin(i * std::numbers::pi * t / T);
            return acc;
        },
        true);
    return detail::scaled(w, 1.0 / anorm(st, w));
}

// Amplitude minimizing the energy along the ray through w.
GridFunction best_on_ray(const ProblemState& st, const GridFunction& w) {
    double best = std::numeric_limits<double>::infinity(), at = 0.01;
    for (int i = 0; i < 300; ++i) {
        const double s = 0.01 + (3.0 - 0.01) * i / 299.0;
        const double E = energy(st, detail::scaled(w, s));
        if (E < best) {
            best = E;
            at = s;
        }
    }
    return detail::scaled(w, at);
}

} // namespace

MultiplicityReport multiplicity_search(const ProblemState& st, int k, double tol, std::uint64_t seed) {
    if (st.spec.family == Family::SUPERLINEAR_POWER)
        throw InvalidArgument("multiplicity_search: SUPERLINEAR_POWER does not match the sublinear regime");
    const auto hyp = validate_hypotheses(st.spec, st.params, Regime::SUBLINEAR, 2000, seed);
    for (const auto& r : hyp.records)
        if (!r.holds)
            throw InvalidArgument("multiplicity_search: hypothesis (" + r.id + ") fails, worst margin " +
                                  std::to_string(r.worst_margin));
    if (k < 1) throw InvalidArgument("multiplicity_search: k must be positive");
    if (!(tol > 0.0)) throw InvalidArgument("multiplicity_search: tol must be positive");

    MultiplicityReport rep;
    rep.requested = k;
    rep.separation = 1e-3 * std::pow(st.params.T, st.params.alpha);
    const NewtonSystem sys(st);
    Rng rng(seed);
    std::vector<GridFunction> sols;
    const int budget = k + 6;
    for (int mode = 1; mode <= budget && static_cast<int>(sols.size()) < k; ++mode) {
        const GridFunction u0 = best_on_ray(st, seed_direction(st, mode, rng));
        SolveReport sr;
        if (sols.empty()) {
            DirectOptions opts;
            opts.require_hypotheses = false;
            sr = minimize_direct(st, u0, tol, 200000, opts);
        } else {
            int it1 = 0, it2 = 0;
            GridFunction u = deflated_newton(st, sys, u0, sols, tol, 200, it1);
            u = deflated_newton(st, sys, u, {}, 1e-2 * tol, 50, it2);
            sr.solution = u;
            sr.energy_value = energy(st, u);
            sr.residual = weak_residual(st, u);
            sr.iterations = it1 + it2;
            sr.converged = sr.residual <= tol;
            sr.trivial = sup_norm(u) <= 1e-10;
        }
        sr.method = "multiplicity";
        sr.seed = seed;
        sr.eps_reg_used = st.eps_reg;
        if (!sr.converged || sr.trivial || !(sr.energy_value < 0.0)) continue;
        bool distinct = anorm(st, sr.solution) >= rep.separation;
        for (const auto& v : sols) {
            if (anorm(st, detail::diff(sr.solution, v)) < rep.separation ||
                anorm(st, detail::axpy(sr.solution, 1.0, v)) < rep.separation)
                distinct = false;
        }
        if (!distinct) continue;
        sols.push_back(sr.solution);
        rep.mirror_energies.push_back(energy(st, detail::scaled(sr.solution, -1.0)));
        rep.pairs.push_back(std::move(sr));
    }
    rep.converged_count = static_cast<int>(rep.pairs.size());
    const std::size_t m = sols.size();
    rep.pairwise_distances.assign(m, std::vector<double>(m, 0.0));
    rep.pairwise_sum_distances.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            rep.pairwise_distances[i][j] = anorm(st, detail::diff(sols[i], sols[j]));
            rep.pairwise_sum_distances[i][j] = anorm(st, detail::axpy(sols[i], 1.0, sols[j]));
        }
    return rep;
}

} // namespace fracpl
