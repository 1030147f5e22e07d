#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fracpl/grid.hpp"

namespace fracpl {

enum class Family { SUBLINEAR_POWER, SUPERLINEAR_POWER, TABLE };
enum class Regime { SUBLINEAR, SUPERLINEAR };

std::string to_string(Family f);
Family parse_family(std::string_view s);
std::string to_string(Regime r);

// a(t) or b(t). Sinusoidal means c0 + c1 sin(omega t).
struct Coefficient {
    enum class Kind { CONSTANT, AFFINE, SINUSOIDAL, TABLE };
    Kind kind = Kind::CONSTANT;
    double c0 = 1.0;
    double c1 = 0.0;
    double omega = 0.0;
    std::vector<double> t_table;
    std::vector<double> values;

    double operator()(double t) const;

    static Coefficient constant(double c);
    static Coefficient affine(double c0, double c1);
    static Coefficient sinusoidal(double c0, double c1, double omega);
    static Coefficient table(std::vector<double> t, std::vector<double> v);
};

std::string to_string(Coefficient::Kind k);
Coefficient::Kind parse_coefficient_kind(std::string_view s);

struct NonlinearitySpec {
    Family family = Family::SUBLINEAR_POWER;
    double q = 1.5;
    double mu = 1.5;
    double r = 1.0;
    double b_const = 1.0;
    Coefficient a_coeff;
    Coefficient b_coeff;
    // TABLE family: f sampled on t_table x u_table, f_table[i][j] = f(t_i, u_j).
    std::vector<double> t_table;
    std::vector<double> u_table;
    std::vector<std::vector<double>> f_table;
};

// f = q a |u|^{q-2} u, F = a |u|^q; mu = q and b = a.
NonlinearitySpec sublinear_power(double q, Coefficient a = Coefficient::constant(1.0));
// f = |u|^{mu-2} u, F = |u|^mu / mu; (S0) with q = mu, b = 1/mu.
NonlinearitySpec superlinear_power(double mu, double r = 1.0);
NonlinearitySpec table_family(std::vector<double> t_table, std::vector<double> u_table,
                              std::vector<std::vector<double>> f_table);

// Throws InvalidArgument for malformed specs (bad exponents, unsorted tables, ...).
void check_spec(const NonlinearitySpec& spec);

struct FValues {
    double f;
    double F;
};

FValues eval(const NonlinearitySpec& spec, double t, double u);
// df/du; the sublinear power is singular at u = 0 and is evaluated at
// max(|u|, u_floor).
double eval_du(const NonlinearitySpec& spec, double t, double u, double u_floor = 1e-12);

bool is_even(const NonlinearitySpec& spec);

struct HypothesisRecord {
    std::string id;
    bool holds = true;
    double worst_margin = 0.0;
    double witness_t = 0.0;
    double witness_u = 0.0;
};

struct HypothesisReport {
    Regime regime = Regime::SUBLINEAR;
    std::vector<HypothesisRecord> records;

    bool all_hold() const;
    const HypothesisRecord& at(std::string_view id) const;
};

HypothesisReport validate_hypotheses(const NonlinearitySpec& spec, const FracParams& params,
                                     Regime regime, int sample_count, std::uint64_t seed);

} // namespace fracpl
