#include "kpplab/frontspeed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kpplab/errors.hpp"
#include "kpplab/parallel.hpp"

namespace kpplab {

namespace {

// Backward continued-fraction sweep for the ratios rho(n) = phi(n+1)/phi(n)
// of the rightward-decaying solution, seeded with the Dirichlet direction at
// the far right edge. The sweep is locked onto the contracted direction,
// which is the attracting fixed point of the backward Mobius iteration, so
// errors shrink geometrically while moving left.
std::vector<double> ratio_sweep(double E, const Potential& p, std::int64_t left,
                                std::int64_t right, std::int64_t buffer) {
    double rho = 0.0;  // phi(right+buffer+1) = 0 seed
    for (std::int64_t n = right + buffer; n > right; --n) {
        const double den = E + 2.0 - p.eval(n) - rho;
        if (den <= 0.0)
            throw NotPositive("decaying solution lost positivity at n=" +
                              std::to_string(n) + " (E too close to the edge?)");
        rho = 1.0 / den;
    }
    std::vector<double> out(static_cast<std::size_t>(right - left + 1));
    out[static_cast<std::size_t>(right - left)] = rho;  // rho(right)
    for (std::int64_t n = right; n > left; --n) {
        const double den = E + 2.0 - p.eval(n) - rho;
        if (den <= 0.0)
            throw NotPositive("decaying solution lost positivity at n=" +
                              std::to_string(n));
        rho = 1.0 / den;  // rho(n-1)
        out[static_cast<std::size_t>(n - 1 - left)] = rho;
    }
    return out;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

DecaySolution decaying_solution(double E, const Potential& p, std::int64_t n_w,
                                double lambda1_hint, double margin) {
    if (n_w < 2) throw Error("decaying_solution requires a window of >= 2 sites");
    const double lambda1 = std::isnan(lambda1_hint)
                               ? lambda1_truncated(p, 1024, 1e-10)
                               : lambda1_hint;
    if (E < lambda1 + margin)
        throw NotPositive("E = " + std::to_string(E) +
                          " is below lambda1 + margin = " +
                          std::to_string(lambda1 + margin));

    // Grow the right buffer until the seed direction has stabilized at the
    // window edge to near machine precision.
    std::int64_t buffer = 256;
    std::vector<double> ratios = ratio_sweep(E, p, -n_w, n_w, buffer);
    while (true) {
        if (buffer > (std::int64_t{1} << 22))
            throw NotPositive("contracted direction did not stabilize; "
                              "E too close to the spectral edge for this window");
        std::vector<double> refined = ratio_sweep(E, p, -n_w, n_w, buffer * 2);
        const double a = ratios[static_cast<std::size_t>(2 * n_w)];
        const double b = refined[static_cast<std::size_t>(2 * n_w)];
        ratios = std::move(refined);
        if (std::fabs(a - b) <= 1e-13 * std::fabs(b)) break;
        buffer *= 2;
    }

    DecaySolution sol;
    sol.E = E;
    sol.n_w = n_w;
    sol.log_phi.assign(static_cast<std::size_t>(2 * n_w + 1), 0.0);
    for (std::int64_t n = 0; n < n_w; ++n)
        sol.log_phi[static_cast<std::size_t>(n + 1 + n_w)] =
            sol.log_phi[static_cast<std::size_t>(n + n_w)] +
            std::log(ratios[static_cast<std::size_t>(n + n_w)]);
    for (std::int64_t n = 0; n > -n_w; --n)
        sol.log_phi[static_cast<std::size_t>(n - 1 + n_w)] =
            sol.log_phi[static_cast<std::size_t>(n + n_w)] -
            std::log(ratios[static_cast<std::size_t>(n - 1 + n_w)]);

    // Recurrence residual in ratio form, relative to E + 2 - c(n).
    double rmax = 0.0;
    for (std::int64_t n = -n_w + 1; n <= n_w - 1; ++n) {
        const double d = E + 2.0 - p.eval(n);
        const double r = ratios[static_cast<std::size_t>(n + n_w)] +
                         1.0 / ratios[static_cast<std::size_t>(n - 1 + n_w)] - d;
        rmax = std::fmax(rmax, std::fabs(r) / std::fabs(d));
    }
    sol.residual_max = rmax;
    if (rmax > 1e-8)
        throw ResidualTooLarge("decaying solution residual " +
                               std::to_string(rmax));
    if (!(sol.log_phi_at(n_w) < sol.log_phi_at(0)))
        throw NotPositive("no rightward decay across the window");
    return sol;
}

SigmaSequence sigma(const DecaySolution& sol) {
    SigmaSequence s;
    s.n_w = sol.n_w;
    s.values.resize(static_cast<std::size_t>(2 * sol.n_w));
    for (std::int64_t n = -sol.n_w; n < sol.n_w; ++n)
        s.values[static_cast<std::size_t>(n + sol.n_w)] =
            sol.log_phi_at(n) - sol.log_phi_at(n + 1);
    return s;
}

double decay_rate(const DecaySolution& sol) {
    std::vector<double> xs, ys;
    for (std::int64_t n = sol.n_w / 2; n <= sol.n_w; ++n) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(-sol.log_phi_at(n));
    }
    return lsq_slope(xs, ys);
}

double decay_rate_left(const DecaySolution& sol) {
    std::vector<double> xs, ys;
    for (std::int64_t n = -sol.n_w; n <= -sol.n_w / 2; ++n) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(-sol.log_phi_at(n));
    }
    return lsq_slope(xs, ys);
}

LyapunovCurve lyapunov_curve(const Potential& p,
                             const std::vector<double>& e_grid,
                             std::int64_t n_iters, int n_phases, int workers) {
    LyapunovCurve curve;
    curve.points.resize(e_grid.size());
    parallel_for(static_cast<std::int64_t>(e_grid.size()), workers,
                 [&](std::int64_t i) {
                     curve.points[static_cast<std::size_t>(i)] = lyapunov(
                         e_grid[static_cast<std::size_t>(i)], p, n_iters, n_phases);
                 });

    auto& d = curve.diagnostics;
    d.monotone_ok = d.concave_ok = d.bounds_ok = true;
    const auto& pts = curve.points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double slack = 2.0 * (pts[i].std_error + pts[i + 1].std_error);
        if (pts[i + 1].value < pts[i].value - slack) d.monotone_ok = false;
    }
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
        const double s1 = (pts[i + 1].value - pts[i].value) /
                          (pts[i + 1].E - pts[i].E);
        const double s2 = (pts[i + 2].value - pts[i + 1].value) /
                          (pts[i + 2].E - pts[i + 1].E);
        const double slack = 3.0 * (pts[i].std_error + pts[i + 1].std_error +
                                    pts[i + 2].std_error);
        if (s2 > s1 + slack / (pts[i + 1].E - pts[i].E)) d.concave_ok = false;
    }
    for (const auto& pt : pts) {
        if (!(pt.value > 0.0)) d.bounds_ok = false;
        const double ub = std::sqrt(std::fmax(pt.E - p.inf_bound(), 0.0));
        if (pt.value > ub + 3.0 * pt.std_error + 1e-9) d.bounds_ok = false;
    }
    return curve;
}

SpeedReport minimal_speed(const Potential& p, const SpeedOptions& opts) {
    SpeedReport rep;
    SpectralEdge edge;
    try {
        edge = spectral_edge(p, opts.edge_tol);
    } catch (const NoConvergence& e) {
        throw EdgeFailure(std::string("minimal_speed: ") + e.what());
    }
    rep.lambda1 = edge.lambda1;

    // L at lambda1 + delta_j, extrapolated to the edge (Aitken on the
    // geometric delta sequence; a sqrt-type vanishing limit cancels exactly).
    std::vector<double> l_edge;
    for (double dj : opts.edge_deltas)
        l_edge.push_back(
            lyapunov(rep.lambda1 + dj, p, opts.n_iters, opts.n_phases).value);
    const std::size_t m = l_edge.size();
    double l_limit = l_edge.back();
    if (m >= 3) {
        const double d1 = l_edge[m - 3] - l_edge[m - 2];
        const double d2 = l_edge[m - 2] - l_edge[m - 1];
        const double den = d1 - d2;
        const double scale = std::fabs(l_edge[m - 3]) + std::fabs(l_edge[m - 1]);
        if (std::fabs(den) > 1e-6 * scale)
            l_limit = l_edge[m - 1] - d2 * d2 / den;
    }
    rep.l_at_edge = l_limit;
    if (l_limit < opts.l_floor ||
        rep.lambda1 / std::fmax(l_limit, 1e-300) > opts.ratio_cap) {
        rep.underline_w_infinite = true;
        rep.underline_w = std::numeric_limits<double>::infinity();
    } else {
        rep.underline_w = rep.lambda1 / l_limit;
    }

    // Coarse log-spaced grid for the ratio E/L(E), then golden-section on the
    // bracketed minimum. Ties resolve to the leftmost minimizer.
    const double span = (opts.e_span > 0.0)
                            ? opts.e_span
                            : std::fmax(8.0, 2.0 * (p.sup_bound() - rep.lambda1) + 8.0);
    const double d_lo = opts.edge_deltas.back();
    std::vector<double> grid;
    for (int i = 0; i < opts.grid_points; ++i) {
        const double t = static_cast<double>(i) / (opts.grid_points - 1);
        grid.push_back(rep.lambda1 + d_lo * std::pow(span / d_lo, t));
    }
    rep.curve = lyapunov_curve(p, grid, opts.n_iters, opts.n_phases, opts.workers);

    auto ratio_at = [&](std::size_t i) {
        return grid[i] / rep.curve.points[i].value;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (ratio_at(i) < ratio_at(best)) best = i;

    auto ratio = [&](double e) {
        return e / lyapunov(e, p, opts.n_iters, opts.n_phases).value;
    };

    if (best == 0 || best + 1 == grid.size()) {
        rep.bracket_warning = true;
        rep.e_star = grid[best];
        rep.w_star = ratio_at(best);
    } else {
        double a = grid[best - 1], b = grid[best + 1];
        const double gr = 0.6180339887498949;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = ratio(x1), f2 = ratio(x2);
        while (b - a > opts.golden_tol) {
            if (f2 < f1) {  // strict: plateaus collapse to the left
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = ratio(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = ratio(x1);
            }
        }
        rep.e_star = (f1 <= f2) ? x1 : x2;
        rep.w_star = std::fmin(f1, f2);
    }
    return rep;
}

}  // namespace kpplab
