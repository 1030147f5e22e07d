#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fracpl/grid.hpp"

namespace fracpl {

enum class OpKind { LEFT_INT, RIGHT_INT, LEFT_DERIV, RIGHT_DERIV, CAPUTO_LEFT, CAPUTO_RIGHT };

std::string to_string(OpKind k);
OpKind parse_op_kind(std::string_view s);

// Lanczos (g = 7); domain_error at non-positive integers.
double gamma(double x);
// 1/Gamma(x), zero at the poles.
double rgamma(double x);

// w_0 = 1, w_k = w_{k-1} (k-1-order)/k for k < count.
std::vector<double> gl_weights(double order, int count);

// Grunwald-Letnikov operators on a uniform grid. The matrices are lower
// triangular Toeplitz, so only the generating weights are kept; right-sided
// operators are the transposes.
struct OperatorSet {
    double alpha = 0.0;
    Grid grid;
    std::vector<double> deriv_w;  // order alpha
    std::vector<double> int_w;    // order -alpha
    double deriv_scale = 1.0;     // h^-alpha
    double int_scale = 1.0;       // h^alpha
    std::vector<double> norm_w;   // quadrature for |D u|^p
};

constexpr int kMaxGridSize = 8192;

OperatorSet build_operators(const FracParams& params, const Grid& grid);
OperatorSet build_operators(double alpha, const Grid& grid);

// Weights for integrating a function of the left derivative: h inside,
// h(1+alpha)/2 at t = T, 0 at t = 0 where (Du)_0 = u_0 h^-alpha vanishes.
std::vector<double> derivative_norm_weights(const Grid& grid, double alpha);

GridFunction apply(const OperatorSet& ops, OpKind kind, const GridFunction& u);

double alpha_norm(const OperatorSet& ops, const GridFunction& u, double p);

// y_i = scale * sum_{k<=i} w_k x_{i-k}
std::vector<double> toeplitz_lower(const std::vector<double>& w, double scale,
                                   const std::vector<double>& x);
// y_i = scale * sum_{k<=n-i} w_k x_{i+k}
std::vector<double> toeplitz_upper(const std::vector<double>& w, double scale,
                                   const std::vector<double>& x);

} // namespace fracpl
