#include "fracpl/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracpl/errors.hpp"
#include "fracpl/random.hpp"

namespace fracpl {

std::string to_string(Family f) {
    switch (f) {
    case Family::SUBLINEAR_POWER: return "SUBLINEAR_POWER";
    case Family::SUPERLINEAR_POWER: return "SUPERLINEAR_POWER";
    case Family::TABLE: return "TABLE";
    }
    throw InvalidArgument("unknown family");
}

Family parse_family(std::string_view s) {
    for (Family f : {Family::SUBLINEAR_POWER, Family::SUPERLINEAR_POWER, Family::TABLE})
        if (to_string(f) == s) return f;
    throw InvalidArgument("unknown nonlinearity family: " + std::string(s));
}

std::string to_string(Regime r) { return r == Regime::SUBLINEAR ? "SUBLINEAR" : "SUPERLINEAR"; }

std::string to_string(Coefficient::Kind k) {
    switch (k) {
    case Coefficient::Kind::CONSTANT: return "constant";
    case Coefficient::Kind::AFFINE: return "affine";
    case Coefficient::Kind::SINUSOIDAL: return "sinusoidal";
    case Coefficient::Kind::TABLE: return "table";
    }
    throw InvalidArgument("unknown coefficient kind");
}

Coefficient::Kind parse_coefficient_kind(std::string_view s) {
    for (auto k : {Coefficient::Kind::CONSTANT, Coefficient::Kind::AFFINE,
                   Coefficient::Kind::SINUSOIDAL, Coefficient::Kind::TABLE})
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown coefficient kind: " + std::string(s));
}

namespace {

// Index i with x in [xs[i], xs[i+1]]; xs sorted, size >= 2.
std::size_t bracket(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
}

double lerp_table(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.size() == 1) return ys[0];
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const std::size_t i = bracket(xs, x);
    const double th = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + th * (ys[i + 1] - ys[i]);
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

double signed_pow(double u, double e) { return std::copysign(std::pow(std::abs(u), e), u); }

// f(t, u_j) for every u node of the table, linear in t.
std::vector<double> table_row(const NonlinearitySpec& s, double t) {
    const auto& ts = s.t_table;
    std::vector<double> row(s.u_table.size());
    const double tol = 1e-12 * std::max(1.0, std::abs(ts.back()));
    if (t < ts.front() - tol || t > ts.back() + tol)
        throw ExtrapolationError("TABLE nonlinearity: t outside table range");
    if (ts.size() == 1) return s.f_table[0];
    const double tc = std::clamp(t, ts.front(), ts.back());
    const std::size_t i = bracket(ts, tc);
    const double th = (tc - ts[i]) / (ts[i + 1] - ts[i]);
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = s.f_table[i][j] + th * (s.f_table[i + 1][j] - s.f_table[i][j]);
    return row;
}

// Integral of the piecewise-linear row from u_table[0] to x.
double row_primitive(const std::vector<double>& us, const std::vector<double>& row, double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < us.size(); ++j) {
        if (x <= us[j]) break;
        const double hi = std::min(x, us[j + 1]);
        const double slope = (row[j + 1] - row[j]) / (us[j + 1] - us[j]);
        const double fhi = row[j] + slope * (hi - us[j]);
        acc += 0.5 * (row[j] + fhi) * (hi - us[j]);
    }
    return acc;
}

void check_table_u(const NonlinearitySpec& s, double u) {
    if (!(u >= s.u_table.front() && u <= s.u_table.back()))
        throw ExtrapolationError("TABLE nonlinearity: u = " + std::to_string(u) +
                                 " outside table range");
}

} // namespace

double Coefficient::operator()(double t) const {
    switch (kind) {
    case Kind::CONSTANT: return c0;
    case Kind::AFFINE: return c0 + c1 * t;
    case Kind::SINUSOIDAL: return c0 + c1 * std::sin(omega * t);
    case Kind::TABLE: return lerp_table(t_table, values, t);
    }
    return c0;
}

Coefficient Coefficient::constant(double c) {
    Coefficient k;
    k.c0 = c;
    return k;
}

Coefficient Coefficient::affine(double c0, double c1) {
    Coefficient k;
    k.kind = Kind::AFFINE;
    k.c0 = c0;
    k.c1 = c1;
    return k;
}

Coefficient Coefficient::sinusoidal(double c0, double c1, double omega) {
    Coefficient k;
    k.kind = Kind::SINUSOIDAL;
    k.c0 = c0;
    k.c1 = c1;
    k.omega = omega;
    return k;
}

Coefficient Coefficient::table(std::vector<double> t, std::vector<double> v) {
    Coefficient k;
    k.kind = Kind::TABLE;
    k.t_table = std::move(t);
    k.values = std::move(v);
    return k;
}

NonlinearitySpec sublinear_power(double q, Coefficient a) {
    NonlinearitySpec s;
    s.family = Family::SUBLINEAR_POWER;
    s.q = q;
    s.mu = q;
    s.a_coeff = a;
    s.b_coeff = a;
    s.b_const = 1.0;
    return s;
}

NonlinearitySpec superlinear_power(double mu, double r) {
    NonlinearitySpec s;
    s.family = Family::SUPERLINEAR_POWER;
    s.q = mu;
    s.mu = mu;
    s.r = r;
    s.b_const = 1.0 / mu;
    return s;
}

NonlinearitySpec table_family(std::vector<double> t_table, std::vector<double> u_table,
                              std::vector<std::vector<double>> f_table) {
    NonlinearitySpec s;
    s.family = Family::TABLE;
    s.t_table = std::move(t_table);
    s.u_table = std::move(u_table);
    s.f_table = std::move(f_table);
    check_spec(s);
    return s;
}

void check_spec(const NonlinearitySpec& s) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(s.q) || !finite(s.mu) || !finite(s.r) || !finite(s.b_const))
        throw InvalidArgument("nonlinearity: non-finite constant");
    auto check_coeff = [](const Coefficient& c, const char* name) {
        if (c.kind == Coefficient::Kind::TABLE) {
            if (c.t_table.empty() || c.t_table.size() != c.values.size() ||
                !strictly_increasing(c.t_table))
                throw InvalidArgument(std::string("nonlinearity: malformed table for ") + name);
        }
    };
    check_coeff(s.a_coeff, "a");
    check_coeff(s.b_coeff, "b");
    switch (s.family) {
    case Family::SUBLINEAR_POWER:
        if (!(s.q > 1.0)) throw InvalidArgument("nonlinearity: q must exceed 1");
        break;
    case Family::SUPERLINEAR_POWER:
        if (!(s.mu > 1.0)) throw InvalidArgument("nonlinearity: mu must exceed 1");
        break;
    case Family::TABLE:
        if (s.t_table.empty() || s.u_table.size() < 2)
            throw InvalidArgument("nonlinearity: TABLE needs t_table and at least two u nodes");
        if (!strictly_increasing(s.t_table) || !strictly_increasing(s.u_table))
            throw InvalidArgument("nonlinearity: TABLE axes must be strictly increasing");
        if (s.f_table.size() != s.t_table.size())
            throw InvalidArgument("nonlinearity: f_table row count differs from t_table");
        for (const auto& row : s.f_table)
            if (row.size() != s.u_table.size())
                throw InvalidArgument("nonlinearity: f_table column count differs from u_table");
        if (!(s.u_table.front() <= 0.0 && s.u_table.back() >= 0.0))
            throw InvalidArgument("nonlinearity: u_table must contain 0");
        break;
    }
}

FValues eval(const NonlinearitySpec& s, double t, double u) {
    switch (s.family) {
    case Family::SUBLINEAR_POWER: {
        const double a = s.a_coeff(t);
        if (u == 0.0) return {0.0, 0.0};
        return {s.q * a * signed_pow(u, s.q - 1.0), a * std::pow(std::abs(u), s.q)};
    }
    case Family::SUPERLINEAR_POWER: {
        if (u == 0.0) return {0.0, 0.0};
        return {signed_pow(u, s.mu - 1.0), std::pow(std::abs(u), s.mu) / s.mu};
    }
    case Family::TABLE: {
        check_table_u(s, u);
        const auto row = table_row(s, t);
        const double f = lerp_table(s.u_table, row, u);
        const double F = row_primitive(s.u_table, row, u) - row_primitive(s.u_table, row, 0.0);
        return {f, F};
    }
    }
    return {0.0, 0.0};
}

double eval_du(const NonlinearitySpec& s, double t, double u, double u_floor) {
    switch (s.family) {
    case Family::SUBLINEAR_POWER:
        return s.q * (s.q - 1.0) * s.a_coeff(t) * std::pow(std::max(std::abs(u), u_floor), s.q - 2.0);
    case Family::SUPERLINEAR_POWER:
        if (u == 0.0) return s.mu == 2.0 ? 1.0 : (s.mu > 2.0 ? 0.0 : std::numeric_limits<double>::infinity());
        return (s.mu - 1.0) * std::pow(std::abs(u), s.mu - 2.0);
    case Family::TABLE: {
        check_table_u(s, u);
        const auto row = table_row(s, t);
        const std::size_t j = bracket(s.u_table, u);
        return (row[j + 1] - row[j]) / (s.u_table[j + 1] - s.u_table[j]);
    }
    }
    return 0.0;
}

bool is_even(const NonlinearitySpec& s) { return s.family != Family::TABLE; }

bool HypothesisReport::all_hold() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.holds; });
}

const HypothesisRecord& HypothesisReport::at(std::string_view id) const {
    for (const auto& r : records)
        if (r.id == id) return r;
    throw InvalidArgument("no hypothesis record " + std::string(id));
}

namespace {

constexpr double kSnap = 1e-12;

// Relative margin of lhs >= rhs.
double ge_margin(double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
    const double m = (lhs - rhs) / scale;
    return std::abs(m) <= kSnap ? 0.0 : m;
}

// x > 0 required; equality counts as a (tiny) violation.
double strict_margin(double x) { return x == 0.0 ? -std::numeric_limits<double>::min() : x; }

struct Tracker {
    HypothesisRecord rec;
    bool first = true;

    explicit Tracker(std::string id) { rec.id = std::move(id); }

    void add(double margin, double t, double u) {
        if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
        if (first || margin < rec.worst_margin) {
            rec.worst_margin = margin;
            rec.witness_t = t;
            rec.witness_u = u;
            first = false;
        }
    }

    HypothesisRecord done() {
        if (first) rec.worst_margin = 0.0;
        rec.holds = !(rec.worst_margin < 0.0);
        return rec;
    }
};

struct Sample {
    double t;
    double u;
};

std::vector<Sample> draw_samples(const NonlinearitySpec& s, const FracParams& params, int count,
                                 std::uint64_t seed) {
    Rng rng(seed);
    const Grid g = make_grid(params.T, 64);
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        const double t = g.nodes[rng.index(g.size())];
        double u;
        if (s.family == Family::TABLE) {
            u = rng.uniform(s.u_table.front(), s.u_table.back());
        } else {
            const double mag = std::pow(10.0, rng.uniform(-6.0, 3.0));
            u = rng.uniform() < 0.5 ? -mag : mag;
        }
        out.push_back({t, u});
    }
    return out;
}

// min over grid nodes of c(t)
std::pair<double, double> min_on_nodes(const Coefficient& c, double T) {
    const Grid g = make_grid(T, 64);
    double worst = std::numeric_limits<double>::infinity(), at = 0.0;
    for (double t : g.nodes) {
        const double v = c(t);
        if (v < worst) {
            worst = v;
            at = t;
        }
    }
    return {worst, at};
}

double p_tilde(const FracParams& fp) {
    const double ap = fp.alpha * fp.p;
    return ap < 1.0 ? fp.p / (1.0 - ap) : std::numeric_limits<double>::infinity();
}

} // namespace

HypothesisReport validate_hypotheses(const NonlinearitySpec& s, const FracParams& params,
                                     Regime regime, int sample_count, std::uint64_t seed) {
    check_spec(s);
    HypothesisReport rep;
    rep.regime = regime;
    const auto samples = draw_samples(s, params, sample_count, seed);
    const double p = params.p;
    const Grid g64 = make_grid(params.T, 64);

    auto F0_margin = [&](Tracker& tr) {
        for (double t : g64.nodes) {
            const double F0 = eval(s, t, 0.0).F;
            tr.add(F0 == 0.0 ? 0.0 : -std::abs(F0), t, 0.0);
        }
    };

    if (regime == Regime::SUBLINEAR) {
        Tracker f1("f1"), f2("f2"), f3("f3");
        F0_margin(f1);
        f1.add(strict_margin(s.q - 1.0), 0.0, 0.0);
        f1.add(strict_margin(p - s.q), 0.0, 0.0);
        const auto [amin, at_a] = min_on_nodes(s.a_coeff, params.T);
        const auto [bmin, at_b] = min_on_nodes(s.b_coeff, params.T);
        f1.add(strict_margin(amin), at_a, 0.0);
        f1.add(strict_margin(bmin), at_b, 0.0);
        f2.add(strict_margin(s.mu - 1.0), 0.0, 0.0);
        f2.add(s.q - s.mu, 0.0, 0.0);
        f2.add(strict_margin(p - s.q), 0.0, 0.0);
        for (const auto& [t, u] : samples) {
            const auto v = eval(s, t, u);
            const double au = std::abs(u);
            f1.add(ge_margin(v.F, s.a_coeff(t) * std::pow(au, s.q)), t, u);
            f1.add(ge_margin(s.q * s.b_coeff(t) * std::pow(au, s.q - 1.0), std::abs(v.f)), t, u);
            f2.add(ge_margin(s.mu * v.F, v.f * u), t, u);
            double Fm;
            try {
                Fm = eval(s, t, -u).F;
            } catch (const ExtrapolationError&) {
                f3.add(-1.0, t, u);
                continue;
            }
            const double scale = std::max({std::abs(v.F), std::abs(Fm), std::numeric_limits<double>::min()});
            const double d = std::abs(v.F - Fm) / scale;
            f3.add(d <= kSnap ? 0.0 : -d, t, u);
        }
        rep.records = {f1.done(), f2.done(), f3.done()};
        return rep;
    }

    Tracker s0("S0"), s1("S1"), s2("S2");
    F0_margin(s0);
    s0.add(strict_margin(s.b_const), 0.0, 0.0);
    s0.add(s.q - p, 0.0, 0.0);
    s0.add(strict_margin(p_tilde(params) - s.q), 0.0, 0.0);
    s1.add(strict_margin(s.mu - p), 0.0, 0.0);
    s1.add(strict_margin(s.r), 0.0, 0.0);
    for (const auto& [t, u] : samples) {
        const auto v = eval(s, t, u);
        s0.add(ge_margin(s.q * s.b_const * std::pow(std::abs(u), s.q - 1.0), std::abs(v.f)), t, u);
        if (std::abs(u) >= s.r) {
            s1.add(ge_margin(u * v.f, s.mu * v.F), t, u);
            s1.add(strict_margin(v.F), t, u);
        }
    }
    // o(|xi|^{p-1}) as monotone decay along xi = 2^-k, k = 0..40
    for (double t : g64.nodes) {
        for (double sign : {1.0, -1.0}) {
            double prev = std::numeric_limits<double>::infinity();
            double last = 0.0;
            bool ok = true;
            for (int k = 0; k <= 40; ++k) {
                const double xi = sign * std::ldexp(1.0, -k);
                double ratio;
                try {
                    ratio = std::abs(eval(s, t, xi).f) / std::pow(std::abs(xi), p - 1.0);
                } catch (const ExtrapolationError&) {
                    s2.add(-1.0, t, xi);
                    ok = false;
                    break;
                }
                if (ratio > prev) s2.add(ge_margin(prev, ratio), t, xi);
                prev = ratio;
                last = ratio;
            }
            if (ok) s2.add((1e-6 - last) / 1e-6, t, sign * std::ldexp(1.0, -40));
        }
    }
    rep.records = {s0.done(), s1.done(), s2.done()};
    return rep;
}

} // namespace fracpl
