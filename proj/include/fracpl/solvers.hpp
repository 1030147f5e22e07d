#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracpl/energy.hpp"

namespace fracpl {

struct SolveReport {
    GridFunction solution;
    double energy_value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string method;
    std::uint64_t seed = 0;
    double eps_reg_used = 0.0;
    bool trivial = false;  // sup_norm(solution) <= 1e-10
    std::vector<double> energy_history;
};

struct DirectOptions {
    bool require_hypotheses = true;
    bool record_history = false;
    int hypothesis_samples = 2000;
    std::uint64_t hypothesis_seed = 0;
};

SolveReport minimize_direct(const ProblemState& st, const GridFunction& init, double tol,
                            int max_iter, const DirectOptions& opts = {});

// sigma * phi with phi = sin(pi t / T) normalized to alpha_norm 1.
GridFunction sine_ray(const ProblemState& st, int mode = 1);

struct MountainPassExtras {
    double beta = 0.0;            // rim value
    double rho = 0.0;             // rim radius
    double sup_constant = 0.0;    // discrete sup-embedding constant
    double rim_min_sampled = 0.0; // min energy over sampled sphere points
    double endpoint_energy = 0.0;
    double endpoint_norm = 0.0;
};

struct MountainPassReport {
    SolveReport solve;
    MountainPassExtras geometry;
};

MountainPassReport mountain_pass_full(const ProblemState& st, int path_points, double tol,
                                      int max_iter, std::uint64_t seed);
SolveReport mountain_pass(const ProblemState& st, int path_points, double tol, int max_iter,
                          std::uint64_t seed);

// Rim value beta(rho*) from (S0) and the discrete sup-embedding constant.
MountainPassExtras rim_geometry(const ProblemState& st, std::uint64_t seed);
// max_i (sum_j h |(I_h)_{ij}|^{p'})^{1/p'} with I_h = left_deriv^{-1} on the interior.
double discrete_sup_constant(const ProblemState& st);

struct MultiplicityReport {
    std::vector<SolveReport> pairs;  // u_j; the partner is -u_j
    std::vector<double> mirror_energies;  // energy(-u_j)
    std::vector<std::vector<double>> pairwise_distances;  // alpha_norm(u_i - u_j)
    std::vector<std::vector<double>> pairwise_sum_distances;  // alpha_norm(u_i + u_j)
    double separation = 0.0;
    int requested = 0;
    int converged_count = 0;
};

MultiplicityReport multiplicity_search(const ProblemState& st, int k, double tol, std::uint64_t seed);

struct RegularityResult {
    double constant_estimate = 0.0;
    double deviation = 0.0;
    double left_constant_estimate = 0.0;  // variant with the left-sided transform
    double left_deviation = 0.0;
};

RegularityResult regularity_check(const ProblemState& st, const GridFunction& u);

} // namespace fracpl
