#include "fracpl/fracops.hpp"

#include <cmath>

#include "fracpl/errors.hpp"

namespace fracpl {

std::string to_string(OpKind k) {
    switch (k) {
    case OpKind::LEFT_INT: return "LEFT_INT";
    case OpKind::RIGHT_INT: return "RIGHT_INT";
    case OpKind::LEFT_DERIV: return "LEFT_DERIV";
    case OpKind::RIGHT_DERIV: return "RIGHT_DERIV";
    case OpKind::CAPUTO_LEFT: return "CAPUTO_LEFT";
    case OpKind::CAPUTO_RIGHT: return "CAPUTO_RIGHT";
    }
    throw InvalidArgument("unknown OpKind");
}

OpKind parse_op_kind(std::string_view s) {
    for (OpKind k : {OpKind::LEFT_INT, OpKind::RIGHT_INT, OpKind::LEFT_DERIV, OpKind::RIGHT_DERIV,
                     OpKind::CAPUTO_LEFT, OpKind::CAPUTO_RIGHT})
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown operator kind: " + std::string(s));
}

std::vector<double> gl_weights(double order, int count) {
    std::vector<double> w(count > 0 ? count : 0);
    if (w.empty()) return w;
    w[0] = 1.0;
    for (int k = 1; k < count; ++k) w[k] = w[k - 1] * ((k - 1.0 - order) / k);
    return w;
}

std::vector<double> derivative_norm_weights(const Grid& grid, double alpha) {
    std::vector<double> w(grid.size(), grid.h);
    w.front() = 0.0;
    w.back() = 0.5 * (1.0 + alpha) * grid.h;
    return w;
}

OperatorSet build_operators(double alpha, const Grid& grid) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("build_operators: alpha out of [0,1]");
    if (grid.n < 2 || grid.size() != static_cast<std::size_t>(grid.n) + 1)
        throw InvalidArgument("build_operators: malformed grid");
    if (grid.n > kMaxGridSize) throw InvalidArgument("build_operators: n exceeds 8192");
    OperatorSet ops;
    ops.alpha = alpha;
    ops.grid = grid;
    const int m = grid.n + 1;
    ops.deriv_w = gl_weights(alpha, m);
    ops.int_w = gl_weights(-alpha, m);
    ops.deriv_scale = std::pow(grid.h, -alpha);
    ops.int_scale = std::pow(grid.h, alpha);
    ops.norm_w = derivative_norm_weights(grid, alpha);
    return ops;
}

OperatorSet build_operators(const FracParams& params, const Grid& grid) {
    if (std::abs(grid.T - params.T) > 1e-12 * params.T)
        throw InvalidArgument("build_operators: grid length differs from T");
    return build_operators(params.alpha, grid);
}

std::vector<double> toeplitz_lower(const std::vector<double>& w, double scale,
                                   const std::vector<double>& x) {
    const std::size_t m = x.size();
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += w[k] * x[i - k];
        y[i] = scale * s;
    }
    return y;
}

std::vector<double> toeplitz_upper(const std::vector<double>& w, double scale,
                                   const std::vector<double>& x) {
    const std::size_t m = x.size();
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; i + k < m; ++k) s += w[k] * x[i + k];
        y[i] = scale * s;
    }
    return y;
}

GridFunction apply(const OperatorSet& ops, OpKind kind, const GridFunction& u) {
    if (u.size() != ops.grid.size()) throw InvalidArgument("apply: grid mismatch");
    GridFunction out;
    out.dirichlet = false;
    const auto& t = ops.grid.nodes;
    const double T = ops.grid.T;
    const std::size_t n = ops.grid.size() - 1;
    switch (kind) {
    case OpKind::LEFT_INT:
        out.values = toeplitz_lower(ops.int_w, ops.int_scale, u.values);
        break;
    case OpKind::RIGHT_INT:
        out.values = toeplitz_upper(ops.int_w, ops.int_scale, u.values);
        break;
    case OpKind::LEFT_DERIV:
        out.values = toeplitz_lower(ops.deriv_w, ops.deriv_scale, u.values);
        break;
    case OpKind::RIGHT_DERIV:
        out.values = toeplitz_upper(ops.deriv_w, ops.deriv_scale, u.values);
        break;
    case OpKind::CAPUTO_LEFT: {
        out.values = toeplitz_lower(ops.deriv_w, ops.deriv_scale, u.values);
        const double c = u[0] * rgamma(1.0 - ops.alpha);
        if (c != 0.0)
            for (std::size_t i = 1; i <= n; ++i) out.values[i] -= c * std::pow(t[i], -ops.alpha);
        break;
    }
    case OpKind::CAPUTO_RIGHT: {
        out.values = toeplitz_upper(ops.deriv_w, ops.deriv_scale, u.values);
        const double c = u[n] * rgamma(1.0 - ops.alpha);
        if (c != 0.0)
            for (std::size_t i = 0; i < n; ++i) out.values[i] -= c * std::pow(T - t[i], -ops.alpha);
        break;
    }
    }
    return out;
}

double alpha_norm(const OperatorSet& ops, const GridFunction& u, double p) {
    check_dirichlet(u);
    if (u.size() != ops.grid.size()) throw InvalidArgument("alpha_norm: grid mismatch");
    if (!(p >= 1.0)) throw InvalidArgument("alpha_norm: p must be at least 1");
    const auto du = toeplitz_lower(ops.deriv_w, ops.deriv_scale, u.values);
    double s = 0.0;
    for (std::size_t i = 0; i < du.size(); ++i) s += ops.norm_w[i] * std::pow(std::abs(du[i]), p);
    return std::pow(s, 1.0 / p);
}

} // namespace fracpl
