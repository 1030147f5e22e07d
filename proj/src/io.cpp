#include "fracpl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fracpl/errors.hpp"

namespace fracpl {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw ConfigError(key, key + " " + msg);
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) fail(prefix + k, "is not a recognized key");
}

const json& object_at(const json& obj, const std::string& prefix, const char* key, bool required) {
    static const json empty = json::object();
    if (!obj.contains(key)) {
        if (required) fail(prefix + key, "is required");
        return empty;
    }
    const json& v = obj.at(key);
    if (!v.is_object()) fail(prefix + key, "must be an object");
    return v;
}

double number(const json& obj, const std::string& prefix, const char* key, std::optional<double> dflt) {
    if (!obj.contains(key)) {
        if (!dflt) fail(prefix + key, "is required");
        return *dflt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) fail(prefix + key, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(prefix + key, "must be finite");
    return d;
}

long long integer(const json& obj, const std::string& prefix, const char* key, std::optional<long long> dflt) {
    if (!obj.contains(key)) {
        if (!dflt) fail(prefix + key, "is required");
        return *dflt;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(prefix + key, "must be an integer");
    return v.get<long long>();
}

std::string string_at(const json& obj, const std::string& prefix, const char* key,
                      std::optional<std::string> dflt) {
    if (!obj.contains(key)) {
        if (!dflt) fail(prefix + key, "is required");
        return *dflt;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) fail(prefix + key, "must be a string");
    return v.get<std::string>();
}

std::vector<double> number_array(const json& obj, const std::string& prefix, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(prefix + key, "must be an array of numbers");
    for (const auto& x : v) {
        if (!x.is_number()) fail(prefix + key, "must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Coefficient parse_coefficient(const json& obj, const std::string& prefix) {
    reject_unknown(obj, prefix, {"kind", "c0", "c1", "omega", "t_table", "values"});
    Coefficient c;
    try {
        c.kind = parse_coefficient_kind(string_at(obj, prefix, "kind", std::string("constant")));
    } catch (const InvalidArgument&) {
        fail(prefix + "kind", "must be one of constant, affine, sinusoidal, table");
    }
    c.c0 = number(obj, prefix, "c0", 1.0);
    c.c1 = number(obj, prefix, "c1", 0.0);
    c.omega = number(obj, prefix, "omega", 0.0);
    c.t_table = number_array(obj, prefix, "t_table");
    c.values = number_array(obj, prefix, "values");
    if (c.kind == Coefficient::Kind::TABLE) {
        if (c.t_table.empty() || c.t_table.size() != c.values.size())
            fail(prefix + "values", "must match t_table in length");
        for (std::size_t i = 1; i < c.t_table.size(); ++i)
            if (!(c.t_table[i] > c.t_table[i - 1])) fail(prefix + "t_table", "must be strictly increasing");
    }
    return c;
}

ojson coefficient_json(const Coefficient& c) {
    ojson j;
    j["kind"] = to_string(c.kind);
    j["c0"] = c.c0;
    j["c1"] = c.c1;
    j["omega"] = c.omega;
    j["t_table"] = c.t_table;
    j["values"] = c.values;
    return j;
}

// Finite numbers as-is, otherwise the string sentinels.
ojson num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

ojson num_array(const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

ojson solve_json(const SolveReport& r) {
    ojson j;
    j["solution"] = num_array(r.solution.values);
    j["energy_value"] = num(r.energy_value);
    j["residual"] = num(r.residual);
    j["iterations"] = r.iterations;
    const bool finite = std::isfinite(r.energy_value) && std::isfinite(r.residual);
    j["converged"] = r.converged && finite;
    j["method"] = r.method;
    j["seed"] = r.seed;
    j["eps_reg_used"] = num(r.eps_reg_used);
    j["trivial"] = r.trivial;
    return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

} // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("<root> is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("<root>", "must be an object");
    reject_unknown(root, "", {"problem", "nonlinearity", "solver", "output"});
    RunConfig cfg;

    const json& pr = object_at(root, "", "problem", true);
    reject_unknown(pr, "problem.", {"alpha", "p", "T", "n"});
    cfg.problem.alpha = number(pr, "problem.", "alpha", std::nullopt);
    if (!(cfg.problem.alpha > 0.0 && cfg.problem.alpha <= 1.0)) fail("problem.alpha", "out of (0,1]");
    cfg.problem.p = number(pr, "problem.", "p", std::nullopt);
    if (!(cfg.problem.p > 1.0)) fail("problem.p", "must exceed 1");
    cfg.problem.T = number(pr, "problem.", "T", 1.0);
    if (!(cfg.problem.T > 0.0)) fail("problem.T", "must be positive");
    const long long n = integer(pr, "problem.", "n", std::nullopt);
    if (n < 2 || n > kMaxGridSize) fail("problem.n", "must be an integer in [2, 8192]");
    cfg.problem.n = static_cast<int>(n);

    const json& nl = object_at(root, "", "nonlinearity", true);
    reject_unknown(nl, "nonlinearity.",
                   {"family", "q", "mu", "r", "b_const", "a", "b", "t_table", "u_table", "f_table"});
    auto& s = cfg.nonlinearity;
    try {
        s.family = parse_family(string_at(nl, "nonlinearity.", "family", std::nullopt));
    } catch (const InvalidArgument&) {
        fail("nonlinearity.family", "must be one of SUBLINEAR_POWER, SUPERLINEAR_POWER, TABLE");
    }
    switch (s.family) {
    case Family::SUBLINEAR_POWER:
        s.q = number(nl, "nonlinearity.", "q", std::nullopt);
        if (!(s.q > 1.0)) fail("nonlinearity.q", "must exceed 1");
        s.mu = number(nl, "nonlinearity.", "mu", s.q);
        s.r = number(nl, "nonlinearity.", "r", 1.0);
        s.b_const = number(nl, "nonlinearity.", "b_const", 1.0);
        break;
    case Family::SUPERLINEAR_POWER:
        s.mu = number(nl, "nonlinearity.", "mu", std::nullopt);
        if (!(s.mu > 1.0)) fail("nonlinearity.mu", "must exceed 1");
        s.q = number(nl, "nonlinearity.", "q", s.mu);
        s.r = number(nl, "nonlinearity.", "r", 1.0);
        s.b_const = number(nl, "nonlinearity.", "b_const", 1.0 / s.mu);
        break;
    case Family::TABLE:
        s.q = number(nl, "nonlinearity.", "q", 1.5);
        s.mu = number(nl, "nonlinearity.", "mu", s.q);
        s.r = number(nl, "nonlinearity.", "r", 1.0);
        s.b_const = number(nl, "nonlinearity.", "b_const", 1.0);
        break;
    }
    if (!(s.r > 0.0)) fail("nonlinearity.r", "must be positive");
    if (!(s.b_const > 0.0)) fail("nonlinearity.b_const", "must be positive");
    s.a_coeff = parse_coefficient(object_at(nl, "nonlinearity.", "a", false), "nonlinearity.a.");
    s.b_coeff = nl.contains("b") ? parse_coefficient(object_at(nl, "nonlinearity.", "b", false), "nonlinearity.b.")
                                 : s.a_coeff;
    s.t_table = number_array(nl, "nonlinearity.", "t_table");
    s.u_table = number_array(nl, "nonlinearity.", "u_table");
    if (nl.contains("f_table")) {
        const json& ft = nl.at("f_table");
        if (!ft.is_array()) fail("nonlinearity.f_table", "must be an array of rows");
        for (const auto& row : ft) {
            if (!row.is_array()) fail("nonlinearity.f_table", "must be an array of rows");
            std::vector<double> r;
            for (const auto& x : row) {
                if (!x.is_number()) fail("nonlinearity.f_table", "must contain numbers only");
                r.push_back(x.get<double>());
            }
            s.f_table.push_back(std::move(r));
        }
    }
    if (s.family == Family::TABLE) {
        try {
            check_spec(s);
        } catch (const InvalidArgument& e) {
            fail("nonlinearity.f_table", std::string("is malformed: ") + e.what());
        }
        const double T = cfg.problem.T;
        if (s.t_table.front() > 1e-12 * T || s.t_table.back() < T * (1.0 - 1e-12))
            fail("nonlinearity.t_table", "must cover [0, problem.T]");
    } else if (!s.t_table.empty() || !s.u_table.empty() || !s.f_table.empty()) {
        fail("nonlinearity.f_table", "is only allowed for family TABLE");
    }

    const json& so = object_at(root, "", "solver", false);
    reject_unknown(so, "solver.", {"method", "tol", "max_iter", "k", "seed", "eps_reg", "path_points",
                                   "init_amplitude", "require_hypotheses"});
    auto& sv = cfg.solver;
    sv.method = string_at(so, "solver.", "method", std::string("direct"));
    if (sv.method != "direct" && sv.method != "mountain_pass" && sv.method != "multiplicity")
        fail("solver.method", "must be one of direct, mountain_pass, multiplicity");
    sv.tol = number(so, "solver.", "tol", 1e-6);
    if (!(sv.tol > 0.0)) fail("solver.tol", "must be positive");
    const long long mi = integer(so, "solver.", "max_iter", 100000);
    if (mi < 0 || mi > 100000000) fail("solver.max_iter", "must be in [0, 1e8]");
    sv.max_iter = static_cast<int>(mi);
    const long long k = integer(so, "solver.", "k", 3);
    if (k < 1 || k > 64) fail("solver.k", "must be in [1, 64]");
    sv.k = static_cast<int>(k);
    if (so.contains("seed") && !so.at("seed").is_number_unsigned()) fail("solver.seed", "must be a non-negative integer");
    sv.seed = so.contains("seed") ? so.at("seed").get<std::uint64_t>() : 42;
    sv.eps_reg = number(so, "solver.", "eps_reg", kDefaultEpsReg);
    if (!(sv.eps_reg >= 0.0)) fail("solver.eps_reg", "must be non-negative");
    const long long pp = integer(so, "solver.", "path_points", 21);
    if (pp < 3 || pp > 10000) fail("solver.path_points", "must be in [3, 10000]");
    sv.path_points = static_cast<int>(pp);
    sv.init_amplitude = number(so, "solver.", "init_amplitude", 0.1);
    if (so.contains("require_hypotheses")) {
        if (!so.at("require_hypotheses").is_boolean()) fail("solver.require_hypotheses", "must be a boolean");
        sv.require_hypotheses = so.at("require_hypotheses").get<bool>();
    }

    const json& out = object_at(root, "", "output", false);
    reject_unknown(out, "output.", {"solution_path", "report_path"});
    cfg.output.solution_path = string_at(out, "output.", "solution_path", std::string());
    cfg.output.report_path = string_at(out, "output.", "report_path", std::string());
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    ojson j;
    j["problem"]["alpha"] = cfg.problem.alpha;
    j["problem"]["p"] = cfg.problem.p;
    j["problem"]["T"] = cfg.problem.T;
    j["problem"]["n"] = cfg.problem.n;
    const auto& s = cfg.nonlinearity;
    ojson nl;
    nl["family"] = to_string(s.family);
    nl["q"] = s.q;
    nl["mu"] = s.mu;
    nl["r"] = s.r;
    nl["b_const"] = s.b_const;
    nl["a"] = coefficient_json(s.a_coeff);
    nl["b"] = coefficient_json(s.b_coeff);
    nl["t_table"] = s.t_table;
    nl["u_table"] = s.u_table;
    nl["f_table"] = s.f_table;
    if (s.family != Family::TABLE) {
        nl.erase("t_table");
        nl.erase("u_table");
        nl.erase("f_table");
    }
    j["nonlinearity"] = nl;
    const auto& sv = cfg.solver;
    j["solver"]["method"] = sv.method;
    j["solver"]["tol"] = sv.tol;
    j["solver"]["max_iter"] = sv.max_iter;
    j["solver"]["k"] = sv.k;
    j["solver"]["seed"] = sv.seed;
    j["solver"]["eps_reg"] = sv.eps_reg;
    j["solver"]["path_points"] = sv.path_points;
    j["solver"]["init_amplitude"] = sv.init_amplitude;
    j["solver"]["require_hypotheses"] = sv.require_hypotheses;
    j["output"]["solution_path"] = cfg.output.solution_path;
    j["output"]["report_path"] = cfg.output.report_path;
    return dump(j);
}

std::string to_json(const SolveReport& r) { return dump(solve_json(r)); }

std::string to_json(const MountainPassReport& r) {
    ojson j = solve_json(r.solve);
    const auto& g = r.geometry;
    ojson geo;
    geo["beta"] = num(g.beta);
    geo["rho"] = num(g.rho);
    geo["sup_constant"] = num(g.sup_constant);
    geo["rim_min_sampled"] = num(g.rim_min_sampled);
    geo["endpoint_energy"] = num(g.endpoint_energy);
    geo["endpoint_scale"] = num(g.endpoint_norm);
    j["geometry"] = geo;
    return dump(j);
}

std::string to_json(const MultiplicityReport& r) {
    ojson j;
    ojson pairs = ojson::array();
    for (std::size_t i = 0; i < r.pairs.size(); ++i) {
        ojson p = solve_json(r.pairs[i]);
        p["mirror_energy"] = num(r.mirror_energies[i]);
        pairs.push_back(p);
    }
    j["pairs"] = pairs;
    ojson d = ojson::array(), ds = ojson::array();
    for (const auto& row : r.pairwise_distances) d.push_back(num_array(row));
    for (const auto& row : r.pairwise_sum_distances) ds.push_back(num_array(row));
    j["pairwise_distances"] = d;
    j["pairwise_sum_distances"] = ds;
    j["separation"] = num(r.separation);
    j["requested"] = r.requested;
    j["converged_count"] = r.converged_count;
    return dump(j);
}

std::string to_json(const HypothesisReport& r) {
    ojson j;
    j["regime"] = to_string(r.regime);
    ojson recs = ojson::array();
    for (const auto& h : r.records) {
        ojson x;
        x["id"] = h.id;
        x["holds"] = h.holds && !std::isnan(h.worst_margin);
        x["worst_margin"] = num(h.worst_margin);
        x["witness"]["t"] = num(h.witness_t);
        x["witness"]["u"] = num(h.witness_u);
        recs.push_back(x);
    }
    j["records"] = recs;
    return dump(j);
}

std::string to_json(const std::vector<VerificationReport>& reports) {
    ojson arr = ojson::array();
    for (const auto& r : reports) {
        ojson j;
        j["property"] = to_string(r.property);
        j["samples"] = r.samples;
        j["worst_margin"] = num(r.worst_margin);
        j["bound_constant"] = num(r.bound_constant);
        j["tolerance_used"] = num(r.tolerance_used);
        const bool finite = std::isfinite(r.worst_margin) && std::isfinite(r.bound_constant) &&
                            (!r.refinement_ratio || std::isfinite(*r.refinement_ratio));
        j["passed"] = r.passed && (finite || r.skipped);
        j["refinement_ratio"] = r.refinement_ratio ? num(*r.refinement_ratio) : ojson(nullptr);
        j["status"] = r.skipped ? "SKIPPED" : "RUN";
        j["reason"] = r.reason;
        j["alpha"] = num(r.alpha);
        j["p"] = num(r.p);
        j["T"] = num(r.T);
        j["n"] = r.n;
        ojson det = ojson::object();
        for (const auto& [k, v] : r.details) det[k] = num(v);
        j["details"] = det;
        arr.push_back(j);
    }
    return dump(arr);
}

std::string format_double(double v) {
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string solution_csv(const Grid& grid, const GridFunction& u) {
    if (u.size() != grid.size()) throw InvalidArgument("solution_csv: grid mismatch");
    std::string out = "t,u\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += format_double(grid.nodes[i]);
        out += ',';
        out += format_double(u[i]);
        out += '\n';
    }
    return out;
}

Table parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,u") throw InvalidArgument("csv: header must be t,u");
    Table tab;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw InvalidArgument("csv: line " + std::to_string(lineno) + " must have two fields");
        auto parse = [&](std::string_view f) {
            double v = 0.0;
            auto r = std::from_chars(f.data(), f.data() + f.size(), v);
            if (r.ec != std::errc() || r.ptr != f.data() + f.size())
                throw InvalidArgument("csv: line " + std::to_string(lineno) + " has a malformed number");
            return v;
        };
        const std::string_view sv(line);
        tab.t.push_back(parse(sv.substr(0, comma)));
        tab.u.push_back(parse(sv.substr(comma + 1)));
    }
    return tab;
}

Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

} // namespace fracpl
