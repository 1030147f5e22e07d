#pragma once

#include <cstddef>
#include <vector>

namespace fracpl {

struct FracParams {
    double alpha = 0.5;
    double p = 2.0;
    double T = 1.0;
    double q_conj = 2.0;  // 1/p + 1/q_conj = 1
};

// Validates and fills q_conj. alpha may equal 1 (classical limit).
FracParams make_params(double alpha, double p, double T);

struct Grid {
    int n = 0;
    double T = 0.0;
    double h = 0.0;
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }
    bool same_as(const Grid& o) const { return n == o.n && T == o.T; }
};

Grid make_grid(double T, int n);

struct GridFunction {
    std::vector<double> values;
    bool dirichlet = false;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

// Samples fn at the nodes. With dirichlet set the end values are forced to 0.
template <class F>
GridFunction sample(const Grid& g, F&& fn, bool dirichlet = false) {
    GridFunction u;
    u.values.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = fn(g.nodes[i]);
    u.dirichlet = dirichlet;
    if (dirichlet) u.values.front() = u.values.back() = 0.0;
    return u;
}

GridFunction zeros(const Grid& g, bool dirichlet = true);

// Throws InvalidArgument if the flag is set and the end values are not 0.
void check_dirichlet(const GridFunction& u);

std::vector<double> trapezoid_weights(const Grid& g);

double lp_norm(const GridFunction& u, double p, const Grid& grid);
double sup_norm(const GridFunction& u);

} // namespace fracpl
