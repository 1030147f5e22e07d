#pragma once

#include <vector>

#include "fracpl/fracops.hpp"
#include "fracpl/grid.hpp"
#include "fracpl/nonlinearity.hpp"

namespace fracpl {

constexpr double kDefaultEpsReg = 1e-10;

struct ProblemState {
    FracParams params;
    Grid grid;
    OperatorSet ops;
    NonlinearitySpec spec;
    double eps_reg = 0.0;             // 0 when p >= 2
    std::vector<double> quad_w;       // trapezoid
    std::vector<double> col_norm;     // alpha_norm of the nodal basis vectors
};

ProblemState make_problem(const FracParams& params, const Grid& grid, const NonlinearitySpec& spec,
                          double eps_reg = kDefaultEpsReg);

// phi(s) = |s|^{p-2} s, regularized for p < 2.
double phi(const ProblemState& st, double s);

// (D u) with D = left_deriv
std::vector<double> left_derivative(const ProblemState& st, const GridFunction& u);

double energy(const ProblemState& st, const GridFunction& u);
// (1/p) ||u||_{alpha,p}^p
double laplacian_energy(const ProblemState& st, const GridFunction& u);

GridFunction gradient(const ProblemState& st, const GridFunction& u);
// Gradient of the p-Laplacian part only.
GridFunction laplacian_gradient(const ProblemState& st, const GridFunction& u);

// sum_i h g_i v_i
double pairing(const ProblemState& st, const GridFunction& g, const GridFunction& v);

double weak_residual(const ProblemState& st, const GridFunction& u);
// Same, from an already computed gradient.
double weak_residual_from_gradient(const ProblemState& st, const GridFunction& g);

double monotonicity_gap(const ProblemState& st, const GridFunction& u, const GridFunction& v);

// A^{-1} A^{-T} g on the interior, A the interior block of left_deriv.
GridFunction precondition(const ProblemState& st, const GridFunction& g);

} // namespace fracpl
