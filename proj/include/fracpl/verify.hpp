#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracpl/grid.hpp"

namespace fracpl {

enum class PropertyId {
    SEMIGROUP,
    LEFT_INVERSE,
    IBP_EXACT,
    IBP_INTEGRAL,
    RL_CAPUTO,
    YOUNG_BOUND,
    POINCARE,
    SUP_EMBED,
    EMBED_LQ,
    TRANSLATION_COMPACT,
    MONOTONE_GAP,
    GRAD_FD,
    EVEN_ENERGY,
};

constexpr std::array<PropertyId, 13> kAllProperties = {
    PropertyId::SEMIGROUP,  PropertyId::LEFT_INVERSE, PropertyId::IBP_EXACT,
    PropertyId::IBP_INTEGRAL, PropertyId::RL_CAPUTO,  PropertyId::YOUNG_BOUND,
    PropertyId::POINCARE,   PropertyId::SUP_EMBED,    PropertyId::EMBED_LQ,
    PropertyId::TRANSLATION_COMPACT, PropertyId::MONOTONE_GAP, PropertyId::GRAD_FD,
    PropertyId::EVEN_ENERGY};

std::string to_string(PropertyId id);
PropertyId parse_property(std::string_view s);
// The statement each property checks.
std::string_view claim_of(PropertyId id);

struct VerificationReport {
    PropertyId property = PropertyId::SEMIGROUP;
    double alpha = 0.0;
    double p = 0.0;
    double T = 0.0;
    int n = 0;
    bool skipped = false;
    std::string reason;  // set when skipped
    int samples = 0;
    double worst_margin = 0.0;
    double bound_constant = 0.0;
    double tolerance_used = 0.0;
    bool passed = false;
    std::optional<double> refinement_ratio;
    std::vector<std::pair<std::string, double>> details;
};

// Tolerance for discretization-limited inequalities at this grid size.
double inequality_tolerance(int n);

VerificationReport verify(PropertyId property, const FracParams& params, const Grid& grid,
                          int samples, std::uint64_t seed);

// Reason string if the property cannot run for these parameters.
std::optional<std::string> precondition_failure(PropertyId property, const FracParams& params);

std::vector<VerificationReport> run_suite(const std::vector<FracParams>& params_list, const Grid& grid,
                                          std::uint64_t seed, int samples = 100);

// Closed-form constants.
double young_constant(const FracParams& params);
double poincare_constant(const FracParams& params);
double sup_embed_constant(const FracParams& params);
// ||u(.+h) - u||_{L^p(0,T-h)} <= translation_constant * ||u||_{alpha,p}
double translation_constant(const FracParams& params, double h);

// Exact RL integral of the piecewise-linear interpolant of u, evaluated at the nodes.
std::vector<double> rl_integral_of_interpolant(const Grid& grid, const std::vector<double>& u, double order);

} // namespace fracpl
