#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "detail.hpp"
#include "fracpl/errors.hpp"
#include "fracpl/random.hpp"
#include "fracpl/solvers.hpp"

namespace fracpl {

namespace {

// h (A x).(A y), A the interior block of left_deriv.
double ip_metric(const ProblemState& st, const GridFunction& x, const GridFunction& y) {
    const auto ax = left_derivative(st, x);
    const auto ay = left_derivative(st, y);
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < ax.size(); ++i) s += ax[i] * ay[i];
    return st.grid.h * s;
}

double golden_max(const auto& fn, double a, double b, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> segment_lengths(const ProblemState& st, const std::vector<GridFunction>& path) {
    std::vector<double> seg(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto d = detail::diff(path[i + 1], path[i]);
        seg[i] = std::sqrt(ip_metric(st, d, d));
    }
    return seg;
}

// Equal arc length in the metric; endpoints kept.
std::vector<GridFunction> resample(const std::vector<GridFunction>& path, const std::vector<double>& seg) {
    const std::size_t m = path.size();
    std::vector<double> cum(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) cum[i + 1] = cum[i] + seg[i];
    const double total = cum.back();
    std::vector<GridFunction> out;
    out.reserve(m);
    out.push_back(path.front());
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double s = total * static_cast<double>(j) / static_cast<double>(m - 1);
        std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
        i = std::min(i == 0 ? 0 : i - 1, m - 2);
        const double th = seg[i] > 0.0 ? (s - cum[i]) / seg[i] : 0.0;
        out.push_back(detail::axpy(path[i], th, detail::diff(path[i + 1], path[i])));
    }
    out.push_back(path.back());
    return out;
}

void check_superlinear(const ProblemState& st) {
    if (st.spec.family == Family::SUBLINEAR_POWER)
        throw InvalidArgument("mountain_pass: SUBLINEAR_POWER does not match the superlinear regime");
    const auto rep = validate_hypotheses(st.spec, st.params, Regime::SUPERLINEAR, 2000, 0);
    for (const auto& r : rep.records)
        if (!r.holds)
            throw InvalidArgument("mountain_pass: hypothesis (" + r.id + ") fails, worst margin " +
                                  std::to_string(r.worst_margin));
}

} // namespace

double discrete_sup_constant(const ProblemState& st) {
    const double h = st.grid.h;
    const double pc = st.params.q_conj;
    const double c = std::pow(h, st.params.alpha - 1.0);
    // entries h^alpha w_k are positive, so the row sum grows with i: take the last interior row
    double s = 0.0;
    for (int k = 0; k + 1 < st.grid.n; ++k) s += h * std::pow(std::abs(c * st.ops.int_w[k]), pc);
    return std::pow(s, 1.0 / pc);
}

MountainPassExtras rim_geometry(const ProblemState& st, std::uint64_t seed) {
    MountainPassExtras g;
    const double p = st.params.p;
    const double q = st.spec.q;
    const double b = st.spec.b_const;
    const double T = st.params.T;
    g.sup_constant = discrete_sup_constant(st);
    if (!(q > p)) throw GeometryError("rim geometry needs q > p in (S0)");
    const double cq = b * T * std::pow(g.sup_constant, q);
    g.rho = std::pow(1.0 / (cq * q), 1.0 / (q - p));
    g.beta = std::pow(g.rho, p) / p - cq * std::pow(g.rho, q);

    // spot check on the sphere with seeded smooth directions
    Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 16; ++s) {
        const int modes = 1 + static_cast<int>(rng.index(8));
        std::vector<double> c(modes);
        for (double& v : c) v = rng.normal();
        GridFunction w = sample(
            st.grid,
            [&](double t) {
                double acc = 0.0;
                for (int j = 0; j < modes; ++j) acc += c[j] * std::sin((j + 1) * std::numbers::pi * t / T);
                return acc;
            },
            true);
        const double nrm = alpha_norm(st.ops, w, p);
        if (nrm == 0.0) continue;
        worst = std::min(worst, energy(st, detail::scaled(w, g.rho / nrm)));
    }
    g.rim_min_sampled = worst;
    return g;
}

MountainPassReport mountain_pass_full(const ProblemState& st, int path_points, double tol,
                                      int max_iter, std::uint64_t seed) {
    check_superlinear(st);
    if (path_points < 3) throw InvalidArgument("mountain_pass: path_points must be at least 3");
    if (!(tol > 0.0)) throw InvalidArgument("mountain_pass: tol must be positive");

    MountainPassReport out;
    out.geometry = rim_geometry(st, seed);

    const GridFunction phi = sine_ray(st);
    double s = 1.0;
    GridFunction e = phi;
    bool found = false;
    for (int k = 0; k < 64; ++k) {
        e = detail::scaled(phi, s);
        if (energy(st, e) < 0.0) {
            found = true;
            break;
        }
        s *= 2.0;
    }
    if (!found) throw GeometryError("mountain_pass: no negative-energy endpoint along the ray");
    out.geometry.endpoint_energy = energy(st, e);
    out.geometry.endpoint_norm = s;

    const std::size_t m = static_cast<std::size_t>(path_points);
    std::vector<GridFunction> path;
    path.reserve(m);
    for (std::size_t k = 0; k < m; ++k) path.push_back(detail::scaled(e, static_cast<double>(k) / (m - 1)));

    SolveReport& rep = out.solve;
    rep.method = "mountain_pass";
    rep.seed = seed;
    rep.eps_reg_used = st.eps_reg;
    GridFunction z = path[m / 2];
    int it = 0;
    for (;; ++it) {
        const auto seg = segment_lengths(st, path);
        double mean = 0.0, mx = 0.0;
        for (double v : seg) {
            mean += v;
            mx = std::max(mx, v);
        }
        mean /= static_cast<double>(seg.size());
        if (mx > 2.0 * mean) path = resample(path, seg);

        std::size_t k = 1;
        double Emax = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j + 1 < m; ++j) {
            const double Ej = energy(st, path[j]);
            if (Ej > Emax) {
                Emax = Ej;
                k = j;
            }
        }
        const GridFunction tau = detail::diff(path[k + 1], path[k - 1]);
        const GridFunction zk = path[k];
        const double sig = golden_max(
            [&](double sg) { return energy(st, detail::axpy(zk, sg, tau)); }, -0.5, 0.5, 1e-10);
        z = detail::axpy(zk, sig, tau);

        const GridFunction g = gradient(st, z);
        rep.residual = weak_residual_from_gradient(st, g);
        if (rep.residual <= tol) {
            rep.converged = true;
            break;
        }
        if (it >= max_iter) break;

        GridFunction d = precondition(st, g);
        const double tt = ip_metric(st, tau, tau);
        if (tt > 0.0) d = detail::axpy(d, -ip_metric(st, d, tau) / tt, tau);
        const double slope = pairing(st, g, d);
        const double E0 = energy(st, z);
        double step = 1.0;
        GridFunction zn = z;
        if (slope > 0.0) {
            while (step >= 1e-16) {
                zn = detail::axpy(z, -step, d);
                if (energy(st, zn) <= E0 - 1e-4 * step * slope) break;
                step *= 0.5;
            }
        }
        path[k] = zn;
    }
    rep.solution = z;
    rep.energy_value = energy(st, z);
    rep.iterations = it;
    rep.trivial = sup_norm(z) <= 1e-10;
    return out;
}

SolveReport mountain_pass(const ProblemState& st, int path_points, double tol, int max_iter,
                          std::uint64_t seed) {
    return mountain_pass_full(st, path_points, tol, max_iter, seed).solve;
}

} // namespace fracpl
