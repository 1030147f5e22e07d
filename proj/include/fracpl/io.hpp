#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracpl/nonlinearity.hpp"
#include "fracpl/solvers.hpp"
#include "fracpl/verify.hpp"

namespace fracpl {

struct RunConfig {
    struct Problem {
        double alpha = 0.0;
        double p = 0.0;
        double T = 1.0;
        int n = 0;
    } problem;
    NonlinearitySpec nonlinearity;
    struct Solver {
        std::string method = "direct";  // direct | mountain_pass | multiplicity
        double tol = 1e-6;
        int max_iter = 100000;
        int k = 3;
        std::uint64_t seed = 42;
        double eps_reg = kDefaultEpsReg;
        int path_points = 21;
        double init_amplitude = 0.1;
        bool require_hypotheses = true;
    } solver;
    struct Output {
        std::string solution_path;
        std::string report_path;
    } output;
};

// Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);  // IoError if unreadable
std::string serialize_config(const RunConfig& cfg);

// JSON documents with fixed key order and "nan"/"inf" sentinels.
std::string to_json(const SolveReport& r);
std::string to_json(const MountainPassReport& r);
std::string to_json(const MultiplicityReport& r);
std::string to_json(const HypothesisReport& r);
std::string to_json(const std::vector<VerificationReport>& reports);

// 17 significant digits, locale independent; zero is written as "0".
std::string format_double(double v);

std::string solution_csv(const Grid& grid, const GridFunction& u);

struct Table {
    std::vector<double> t;
    std::vector<double> u;
};

// Two columns with header "t,u".
Table parse_csv(const std::string& text);
Table read_csv(const std::string& path);
void write_text(const std::string& path, const std::string& text);

} // namespace fracpl
