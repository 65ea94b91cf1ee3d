#include "stoplab/checks.hpp"

#include "stoplab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stoplab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double tol_mono(double max_abs, double eval_noise) { return 1e-12 * (1.0 + max_abs) + 2.0 * eval_noise; }

Table<double> sample(const ScalarField& f, const std::vector<double>& ts, const std::vector<double>& xs) {
    Table<double> out(ts.size(), xs.size());
    for (std::size_t k = 0; k < ts.size(); ++k)
        for (std::size_t j = 0; j < xs.size(); ++j) out(k, j) = f(ts[k], xs[j]);
    return out;
}

double max_abs(const Table<double>& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::fabs(v));
    return m;
}

CheckReport x_monotone(const char* name, const ScalarField& f, const Grid& grid) {
    const std::vector<double> ts = f.time_dependent ? grid.t : std::vector<double>{0.0};
    const Table<double> vals = sample(f, ts, grid.x);
    const double tol = tol_mono(max_abs(vals), f.eval_noise);
    WorstTracker w;
    for (std::size_t k = 0; k < ts.size(); ++k)
        for (std::size_t j = 0; j + 1 < grid.x.size(); ++j)
            w.observe(vals(k, j) - vals(k, j + 1),
                      {ts[k], grid.x[j], f.time_dependent ? std::optional<std::size_t>(k) : std::nullopt, j});
    return w.finish(name, tol, f.time_dependent ? "probed at every time node" : "time-independent; probed at t=0");
}

CheckReport t_monotone(const char* name, const ScalarField& f, const Grid& grid) {
    if (!f.time_dependent) {
        CheckReport r;
        r.check = name;
        r.verdict = Verdict::pass;
        r.worst = 0.0;
        r.tolerance = 0.0;
        r.notes = "field does not depend on t";
        return r;
    }
    const Table<double> vals = sample(f, grid.t, grid.x);
    const double tol = tol_mono(max_abs(vals), f.eval_noise);
    WorstTracker w;
    for (std::size_t k = 0; k + 1 < grid.t.size(); ++k)
        for (std::size_t j = 0; j < grid.x.size(); ++j)
            w.observe(vals(k + 1, j) - vals(k, j), {grid.t[k + 1], grid.x[j], k + 1, j});
    return w.finish(name, tol);
}

}  // namespace

CheckReport check_g_monotone(const ScalarField& g, const Grid& grid) {
    return x_monotone("g_monotone", g, grid);
}

CheckReport check_mu_time_monotone(const ScalarField& mu, const Grid& grid, Scope scope) {
    if (scope == Scope::everywhere) return t_monotone("mu_time_monotone", mu, grid);

    const Table<double> vals = sample(mu, grid.t, grid.x);
    const double tol = tol_mono(max_abs(vals), mu.eval_noise);
    WorstTracker w;
    std::size_t in_region = 0;
    for (std::size_t j = 0; j < grid.x.size(); ++j) {
        double earlier_min = vals(0, j);
        for (std::size_t k = 1; k < grid.t.size(); ++k) {
            if (vals(k, j) < -tol_zero) {
                ++in_region;
                w.observe(vals(k, j) - earlier_min, {grid.t[k], grid.x[j], k, j});
            }
            earlier_min = std::min(earlier_min, vals(k, j));
        }
    }
    std::ostringstream notes;
    notes << "later point in M = {mu < -" << tol_zero << "}; " << in_region << " nodes in scope";
    return w.finish("mu_time_monotone_region", tol, notes.str());
}

RegionMasks classify_regions(const ValueSurface& s, const ScalarField& drift) {
    const std::size_t rows = s.v.rows();
    const std::size_t cols = s.v.cols();
    RegionMasks m{Table<std::uint8_t>(rows, cols), Table<std::uint8_t>(rows, cols),
                  Table<std::uint8_t>(rows, cols), Table<std::uint8_t>(rows, cols)};
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t j = 0; j < cols; ++j) {
            const bool stop = s.exercise(k, j) != 0;
            m.D(k, j) = stop;
            m.C(k, j) = !stop;
            bool neg = false;
            try {
                neg = drift(s.grid.t[k], s.grid.x[j]) < -tol_zero;
            } catch (const Error&) {
                neg = false;
            }
            m.M(k, j) = neg;
            m.Mc(k, j) = !neg;
        }
    }
    return m;
}

CheckReport check_condition_iii(const ValueSurface& s, const ScalarField& mu, const ScalarField& sigma) {
    const RegionMasks m = classify_regions(s, mu);
    const Grid& g = s.grid;
    const std::size_t Nt = g.nt();
    const std::size_t N = g.nx();
    const double dx = g.dx;

    auto transition = [&](std::size_t k, std::size_t j, std::size_t k2, std::size_t j2) {
        return m.C(k, j) != m.C(k2, j2) || m.M(k, j) != m.M(k2, j2);
    };

    struct Node {
        std::size_t k, j;
        double q, scale;
    };
    std::vector<Node> nodes;
    std::size_t excluded = 0;
    for (std::size_t k = 0; k < Nt; ++k) {
        for (std::size_t j = 1; j < N; ++j) {
            if (!m.C(k, j) || !m.Mc(k, j)) continue;
            const bool near = transition(k, j, k, j - 1) || transition(k, j, k, j + 1) ||
                              transition(k, j, k + 1, j) || (k > 0 && transition(k, j, k - 1, j));
            if (near || j == 1 || j + 1 == N) {
                ++excluded;
                continue;
            }
            const double vx = (s.v(k, j + 1) - s.v(k, j - 1)) / (2.0 * dx);
            const double vxx = (s.v(k, j + 1) - 2.0 * s.v(k, j) + s.v(k, j - 1)) / (dx * dx);
            const double sig = sigma(0.0, g.x[j]);
            const double drift = mu(g.t[k], g.x[j]);
            const double a = sig * sig * vxx;
            const double b = 2.0 * drift * vx;
            nodes.push_back({k, j, a + b, std::fabs(a) + std::fabs(b)});
        }
    }
    double scale = 1.0;
    for (const Node& n : nodes) scale = std::max(scale, n.scale);
    const double tol = 10.0 * dx * scale;

    WorstTracker w;
    for (const Node& n : nodes) w.observe(-n.q, {g.t[n.k], g.x[n.j], n.k, n.j});
    std::ostringstream notes;
    notes << nodes.size() << " nodes of C and M^c checked, " << excluded
          << " skipped next to mask changes or edges";
    if (nodes.empty()) notes << "; C and M^c has no checkable node";
    return w.finish("condition_iii", tol, notes.str());
}

HMonotoneReport check_h_monotone(const ScalarField& h, const Grid& grid) {
    HMonotoneReport r;
    r.x_part = x_monotone("h_monotone_x", h, grid);
    r.t_part = t_monotone("h_monotone_t", h, grid);
    const bool x_fail = r.x_part.failed();
    const bool t_fail = r.t_part.failed();
    r.overall.check = "h_monotone";
    r.overall.tolerance = std::max(r.x_part.tolerance, r.t_part.tolerance);
    const CheckReport& worse = r.t_part.worst > r.x_part.worst ? r.t_part : r.x_part;
    r.overall.worst = worse.worst;
    r.overall.witness = worse.witness;
    if (x_fail || t_fail)
        r.overall.verdict = Verdict::fail;
    else if (r.x_part.passed() && r.t_part.passed())
        r.overall.verdict = Verdict::pass;
    else
        r.overall.verdict = Verdict::inconclusive;
    r.overall.notes = std::string("x: ") + std::string(to_string(r.x_part.verdict)) +
                      ", t: " + std::string(to_string(r.t_part.verdict));
    return r;
}

CheckReport verify_value_time_monotone(const ValueSurface& s) {
    const double tol = 10.0 * s.meta.tol_contact;
    WorstTracker w;
    for (std::size_t k = 0; k + 1 < s.v.rows(); ++k)
        for (std::size_t j = 0; j < s.v.cols(); ++j)
            w.observe(s.v(k + 1, j) - s.v(k, j), {s.grid.t[k + 1], s.grid.x[j], k + 1, j});
    return w.finish("value_time_monotone", tol, "tol = 10 tol_contact");
}

CheckReport verify_boundary_monotone(const Boundary& b) {
    // Work in lower orientation: upper boundaries are negated first.
    const double sign = b.orientation == Orientation::lower ? 1.0 : -1.0;
    auto rank = [](double v) { return v == -inf ? 0 : (v == inf ? 2 : 1); };
    WorstTracker w;
    for (std::size_t k = 0; k + 1 < b.b.size(); ++k) {
        const double a = sign * b.b[k];
        const double c = sign * b.b[k + 1];
        double violation = 0.0;
        if (rank(a) == 1 && rank(c) == 1)
            violation = a - c;
        else if (rank(a) > rank(c))
            violation = inf;
        Witness where;
        where.t = b.t[k];
        where.t_node = k;
        w.observe(violation, where);
    }
    return w.finish("boundary_monotone", b.dx,
                    b.orientation == Orientation::lower ? "lower boundary, non-decreasing within one cell"
                                                        : "upper boundary, non-increasing within one cell");
}

CheckReport check_continuity(const ValueSurface& s) {
    const double tol = 10.0 * s.meta.tol_contact;
    WorstTracker w;
    const std::size_t cols = s.v.cols();
    for (std::size_t k = 0; k < s.v.rows(); ++k) {
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            const double jump = std::fabs(s.v(k, j + 1) - s.v(k, j));
            double neighbours = 0.0;
            if (j > 0) neighbours = std::max(neighbours, std::fabs(s.v(k, j) - s.v(k, j - 1)));
            if (j + 2 < cols) neighbours = std::max(neighbours, std::fabs(s.v(k, j + 2) - s.v(k, j + 1)));
            const double g_jump = std::fabs(s.obstacle(k, j + 1) - s.obstacle(k, j));
            w.observe(jump - 4.0 * (neighbours + g_jump), {s.grid.t[k], s.grid.x[j], k, j});
        }
    }
    return w.finish("continuity_scan", tol, "heuristic: isolated x-jumps of v beyond 4x neighbouring increments");
}

}  // namespace stoplab
