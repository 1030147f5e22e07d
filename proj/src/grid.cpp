#include "fracpl/grid.hpp"

#include <cmath>
#include <string>

#include "fracpl/errors.hpp"

namespace fracpl {

FracParams make_params(double alpha, double p, double T) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidArgument("alpha out of (0,1]: " + std::to_string(alpha));
    if (!(p > 1.0) || !std::isfinite(p))
        throw InvalidArgument("p must exceed 1: " + std::to_string(p));
    if (!(T > 0.0) || !std::isfinite(T))
        throw InvalidArgument("T must be positive: " + std::to_string(T));
    FracParams fp;
    fp.alpha = alpha;
    fp.p = p;
    fp.T = T;
    fp.q_conj = p / (p - 1.0);
    return fp;
}

Grid make_grid(double T, int n) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("grid: T must be positive");
    if (n < 2) throw InvalidArgument("grid: n must be at least 2");
    Grid g;
    g.n = n;
    g.T = T;
    g.h = T / n;
    g.nodes.resize(n + 1);
    for (int i = 0; i <= n; ++i) g.nodes[i] = i * g.h;
    g.nodes[n] = T;
    return g;
}

GridFunction zeros(const Grid& g, bool dirichlet) {
    GridFunction u;
    u.values.assign(g.size(), 0.0);
    u.dirichlet = dirichlet;
    return u;
}

void check_dirichlet(const GridFunction& u) {
    if (!u.dirichlet) throw InvalidArgument("grid function is not dirichlet");
    if (u.values.empty() || u.values.front() != 0.0 || u.values.back() != 0.0)
        throw InvalidArgument("dirichlet grid function has nonzero boundary values");
}

std::vector<double> trapezoid_weights(const Grid& g) {
    std::vector<double> w(g.size(), g.h);
    w.front() = w.back() = 0.5 * g.h;
    return w;
}

double lp_norm(const GridFunction& u, double p, const Grid& grid) {
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be at least 1");
    if (u.size() != grid.size()) throw InvalidArgument("lp_norm: grid mismatch");
    const auto w = trapezoid_weights(grid);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(std::abs(u[i]), p);
    return std::pow(s, 1.0 / p);
}

double sup_norm(const GridFunction& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace fracpl
