#include "fracpl/solvers.hpp"

#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "fracpl/errors.hpp"

namespace fracpl {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr double kShrink = 0.5;
constexpr double kMinStep = 1e-20;

void check_init(const ProblemState& st, const GridFunction& u) {
    if (u.size() != st.grid.size()) throw InvalidArgument("initial guess: grid mismatch");
    check_dirichlet(u);
}

} // namespace

GridFunction sine_ray(const ProblemState& st, int mode) {
    const double T = st.grid.T;
    GridFunction phi = sample(
        st.grid, [&](double t) { return std::sin(mode * std::numbers::pi * t / T); }, true);
    const double nrm = alpha_norm(st.ops, phi, st.params.p);
    return detail::scaled(phi, 1.0 / nrm);
}

SolveReport minimize_direct(const ProblemState& st, const GridFunction& init, double tol,
                            int max_iter, const DirectOptions& opts) {
    if (st.spec.family == Family::SUPERLINEAR_POWER)
        throw InvalidArgument("minimize_direct: SUPERLINEAR_POWER does not match the sublinear regime");
    if (opts.require_hypotheses) {
        const auto rep = validate_hypotheses(st.spec, st.params, Regime::SUBLINEAR,
                                             opts.hypothesis_samples, opts.hypothesis_seed);
        for (const char* id : {"f1", "f2"})
            if (!rep.at(id).holds)
                throw InvalidArgument(std::string("minimize_direct: hypothesis (") + id +
                                      ") fails, worst margin " +
                                      std::to_string(rep.at(id).worst_margin));
    }
    if (!(tol > 0.0)) throw InvalidArgument("minimize_direct: tol must be positive");
    if (max_iter < 0) throw InvalidArgument("minimize_direct: max_iter must be non-negative");
    check_init(st, init);

    SolveReport rep;
    rep.method = "direct";
    rep.eps_reg_used = st.eps_reg;
    GridFunction u = init;
    double E = energy(st, u);
    if (opts.record_history) rep.energy_history.push_back(E);
    int it = 0;
    for (;; ++it) {
        const GridFunction g = gradient(st, u);
        const double r = weak_residual_from_gradient(st, g);
        rep.residual = r;
        if (r <= tol) {
            rep.converged = true;
            break;
        }
        if (it >= max_iter) break;
        GridFunction d = precondition(st, g);
        double slope = pairing(st, g, d);
        if (!(slope > 0.0)) {
            d = g;
            slope = pairing(st, g, d);
        }
        double s = 1.0;
        GridFunction un;
        double En = E;
        bool accepted = false;
        while (s >= kMinStep) {
            un = detail::axpy(u, -s, d);
            En = energy(st, un);
            if (En <= E - kArmijoC1 * s * slope && En < E) {
                accepted = true;
                break;
            }
            s *= kShrink;
        }
        if (!accepted) break;  // stagnation at rounding level
        u = std::move(un);
        E = En;
        if (opts.record_history) rep.energy_history.push_back(E);
    }
    rep.solution = u;
    rep.energy_value = E;
    rep.iterations = it;
    rep.trivial = sup_norm(u) <= 1e-10;
    return rep;
}

RegularityResult regularity_check(const ProblemState& st, const GridFunction& u) {
    const double alpha = st.params.alpha;
    if (!(alpha < 1.0 / st.params.p))
        throw InvalidArgument("regularity_check: requires alpha < 1/p");
    if (u.size() != st.grid.size()) throw InvalidArgument("regularity_check: grid mismatch");
    check_dirichlet(u);

    const std::size_t m = u.size();
    const double h = st.grid.h;
    const auto du = left_derivative(st, u);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = st.ops.norm_w[i] / h * phi(st, du[i]);

    const auto w = gl_weights(alpha - 1.0, static_cast<int>(m));
    const double scale = std::pow(h, 1.0 - alpha);
    const auto right = toeplitz_upper(w, scale, y);
    const auto left = toeplitz_lower(w, scale, y);

    std::vector<double> cum(m, 0.0);
    double fprev = eval(st.spec, st.grid.nodes[0], u[0]).f;
    for (std::size_t i = 1; i < m; ++i) {
        const double fi = eval(st.spec, st.grid.nodes[i], u[i]).f;
        cum[i] = cum[i - 1] + 0.5 * h * (fprev + fi);
        fprev = fi;
    }

    auto stats = [&](const std::vector<double>& tr, double& mean, double& dev) {
        mean = 0.0;
        for (std::size_t j = 1; j + 1 < m; ++j) mean += tr[j] + cum[j];
        mean /= static_cast<double>(m - 2);
        dev = 0.0;
        for (std::size_t j = 1; j + 1 < m; ++j) dev = std::max(dev, std::abs(tr[j] + cum[j] - mean));
    };
    RegularityResult res;
    stats(right, res.constant_estimate, res.deviation);
    stats(left, res.left_constant_estimate, res.left_deviation);
    return res;
}

} // namespace fracpl
