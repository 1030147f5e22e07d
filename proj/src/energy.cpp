#include "fracpl/energy.hpp"

#include <cmath>

#include "fracpl/errors.hpp"

namespace fracpl {

ProblemState make_problem(const FracParams& params, const Grid& grid, const NonlinearitySpec& spec,
                          double eps_reg) {
    if (!(eps_reg >= 0.0) || !std::isfinite(eps_reg))
        throw InvalidArgument("eps_reg must be non-negative");
    check_spec(spec);
    ProblemState st;
    st.params = params;
    st.grid = grid;
    st.ops = build_operators(params, grid);
    st.spec = spec;
    st.eps_reg = params.p < 2.0 ? eps_reg : 0.0;
    st.quad_w = trapezoid_weights(grid);

    const std::size_t m = grid.size();
    const double p = params.p;
    const auto& w = st.ops.deriv_w;
    const auto& nw = st.ops.norm_w;
    // column j of left_deriv is h^-alpha w_{i-j} at rows i >= j
    std::vector<double> tail(m, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        double s = 0.0;
        for (std::size_t k = 0; k + i < m; ++k) s += nw[i + k] * std::pow(std::abs(w[k]), p);
        tail[i] = s;
    }
    st.col_norm.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) st.col_norm[j] = st.ops.deriv_scale * std::pow(tail[j], 1.0 / p);
    return st;
}

double phi(const ProblemState& st, double s) {
    const double p = st.params.p;
    if (p == 2.0) return s;
    if (st.eps_reg > 0.0) return std::pow(s * s + st.eps_reg * st.eps_reg, 0.5 * (p - 2.0)) * s;
    if (s == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

namespace {

void require(const ProblemState& st, const GridFunction& u) {
    check_dirichlet(u);
    if (u.size() != st.grid.size()) throw InvalidArgument("grid mismatch");
}

} // namespace

std::vector<double> left_derivative(const ProblemState& st, const GridFunction& u) {
    return toeplitz_lower(st.ops.deriv_w, st.ops.deriv_scale, u.values);
}

double laplacian_energy(const ProblemState& st, const GridFunction& u) {
    require(st, u);
    const auto du = left_derivative(st, u);
    const double p = st.params.p;
    double s = 0.0;
    for (std::size_t i = 0; i < du.size(); ++i) s += st.ops.norm_w[i] * std::pow(std::abs(du[i]), p);
    return s / p;
}

double energy(const ProblemState& st, const GridFunction& u) {
    const double lap = laplacian_energy(st, u);
    double fs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        fs += st.quad_w[i] * eval(st.spec, st.grid.nodes[i], u[i]).F;
    return lap - fs;
}

GridFunction laplacian_gradient(const ProblemState& st, const GridFunction& u) {
    require(st, u);
    const auto du = left_derivative(st, u);
    std::vector<double> y(du.size());
    const double inv_h = 1.0 / st.grid.h;
    for (std::size_t i = 0; i < du.size(); ++i) y[i] = st.ops.norm_w[i] * phi(st, du[i]) * inv_h;
    GridFunction g;
    g.values = toeplitz_upper(st.ops.deriv_w, st.ops.deriv_scale, y);
    g.values.front() = g.values.back() = 0.0;
    g.dirichlet = true;
    return g;
}

GridFunction gradient(const ProblemState& st, const GridFunction& u) {
    GridFunction g = laplacian_gradient(st, u);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) g[i] -= eval(st.spec, st.grid.nodes[i], u[i]).f;
    return g;
}

double pairing(const ProblemState& st, const GridFunction& g, const GridFunction& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * v[i];
    return st.grid.h * s;
}

double weak_residual_from_gradient(const ProblemState& st, const GridFunction& g) {
    double r = 0.0;
    for (std::size_t j = 1; j + 1 < g.size(); ++j)
        r = std::max(r, st.grid.h * std::abs(g[j]) / st.col_norm[j]);
    return r;
}

double weak_residual(const ProblemState& st, const GridFunction& u) {
    return weak_residual_from_gradient(st, gradient(st, u));
}

double monotonicity_gap(const ProblemState& st, const GridFunction& u, const GridFunction& v) {
    const GridFunction gu = laplacian_gradient(st, u);
    const GridFunction gv = laplacian_gradient(st, v);
    double inner = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) inner += (gu[i] - gv[i]) * (u[i] - v[i]);
    inner *= st.grid.h;
    const double p = st.params.p;
    const double nu = std::pow(p * laplacian_energy(st, u), 1.0 / p);
    const double nv = std::pow(p * laplacian_energy(st, v), 1.0 / p);
    return inner - (std::pow(nu, p - 1.0) - std::pow(nv, p - 1.0)) * (nu - nv);
}

GridFunction precondition(const ProblemState& st, const GridFunction& g) {
    // The inverse of the lower-triangular GL Toeplitz block is the GL integral
    // block, so both solves reduce to Toeplitz products.
    const std::size_t m = g.size();
    std::vector<double> interior(g.values.begin() + 1, g.values.end() - 1);
    auto y = toeplitz_upper(st.ops.int_w, st.ops.int_scale, interior);
    auto d = toeplitz_lower(st.ops.int_w, st.ops.int_scale, y);
    GridFunction out;
    out.values.assign(m, 0.0);
    std::copy(d.begin(), d.end(), out.values.begin() + 1);
    out.dirichlet = true;
    return out;
}

} // namespace fracpl
