// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and run sizes are pinned here.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "kpplab/cocycle.hpp"
#include "kpplab/frontspeed.hpp"
#include "kpplab/kam/reduce.hpp"
#include "kpplab/kpp_sim.hpp"
#include "kpplab/potentials.hpp"
#include "kpplab/spectrum.hpp"

using namespace kpplab;

namespace {

constexpr double kGolden = 0.61803398874989484820458683436564;
constexpr double kPi = 3.14159265358979323846264338327950;

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-34s %s\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

template <typename Fn>
void run(int id, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// Independent 1-D minimization oracle for the constant-media minimal speed.
double w_star_const_oracle(double c0) {
    auto f = [c0](double l) { return (2.0 * std::cosh(l) - 2.0 + c0) / l; };
    double a = 1e-3, b = 10.0;
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-11) {
        if (f2 < f1) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return std::fmin(f1, f2);
}

void criterion1() {
    Timer timer;
    const auto p = Potential::constant(1.0);
    double worst = 0.0;
    for (double e : {1.5, 2.0, 3.0, 5.0}) {
        const auto est = lyapunov(e, p, 10000, 1);
        worst = std::fmax(worst, std::fabs(est.value - std::acosh((e + 1.0) / 2.0)));
    }
    const double secs = timer.seconds();
    report(1, "constant-media Lyapunov oracle", worst <= 1e-8 && secs < 1.0,
           fmt("max |L - acosh((E+1)/2)| = %.2e, %.2fs", worst, secs));
}

void criterion2() {
    Timer timer;
    const auto p = Potential::amo(2.0, 5.0, kGolden);
    const auto edge = spectral_edge(p, 1e-7);
    const auto est = lyapunov(edge.lambda1, p, 1000000, 16);
    const double err = std::fabs(est.value - std::log(2.0));
    const double secs = timer.seconds();
    report(2, "AMO supercritical L = ln 2", err <= 0.05 && secs < 30.0,
           fmt("lambda1 = %.6f, |L - ln2| = %.4f, %.1fs", edge.lambda1, err, secs));
}

void criterion3() {
    Timer timer;
    const auto p = Potential::amo(0.5, 3.0, kGolden);
    SpeedOptions opts;
    opts.n_iters = 1000000;
    opts.n_phases = 16;
    const auto rep = minimal_speed(p, opts);
    const double l_near = lyapunov(rep.lambda1 + 0.0125, p, 1000000, 16).value;
    const double secs = timer.seconds();
    report(3, "AMO subcritical edge",
           l_near <= 0.05 && rep.underline_w_infinite && secs < 60.0,
           fmt("L(lambda1+0.0125) = %.4f, L_edge_extrap = %.2e, w_inf = %d, %.1fs",
               l_near, rep.l_at_edge, rep.underline_w_infinite ? 1 : 0, secs));
}

void criterion4() {
    const std::vector<std::int64_t> ns = {50, 100, 200, 400, 800};
    const Potential pots[] = {Potential::constant(1.0),
                              Potential::periodic({0.5, 1.5}),
                              Potential::amo(2.0, 5.0, kGolden)};
    bool monotone = true;
    double worst_closed = 0.0;
    for (const auto& p : pots) {
        double prev = -1e300;
        for (auto n : ns) {
            const double cur = lambda1_truncated(p, n);
            if (cur < prev - 1e-12) monotone = false;
            prev = cur;
        }
    }
    for (auto n : ns) {
        const double closed = 1.0 - 2.0 + 2.0 * std::cos(kPi / (2.0 * n));
        worst_closed = std::fmax(
            worst_closed,
            std::fabs(lambda1_truncated(Potential::constant(1.0), n) - closed));
    }
    report(4, "spectral-edge convergence", monotone && worst_closed <= 1e-10,
           fmt("monotone = %d, |lambda1^N - closed form| = %.2e", monotone ? 1 : 0,
               worst_closed));
}

void criterion5() {
    const Potential pots[] = {Potential::constant(1.0),
                              Potential::periodic({0.5, 1.5}),
                              Potential::amo(0.8, 3.0, kGolden)};
    double worst = 0.0;
    for (const auto& p : pots) {
        const double lo = p.inf_bound() - 4.0;
        const double hi = p.sup_bound();
        for (int i = 0; i < 20; ++i) {
            const double e = lo + (hi - lo) * (i + 0.5) / 20.0;
            const double k = ids(p, e, 2000).k;
            const double rho = rotation_number(e, p, 100000).rho;
            double d = std::fabs(k - (1.0 - 2.0 * rho));
            d = std::fmin(d, std::fabs(1.0 - d));
            worst = std::fmax(worst, d);
        }
    }
    report(5, "IDS-rotation identity", worst <= 0.02,
           fmt("max |k - (1-2rho)| mod 1 = %.4f", worst));
}

void criterion6() {
    const Potential pots[] = {Potential::constant(1.0),
                              Potential::periodic({0.5, 1.5}),
                              Potential::amo(2.0, 5.0, kGolden)};
    double worst = 0.0;
    for (const auto& p : pots) {
        const double lambda1 = spectral_edge(p, 1e-7).lambda1;
        for (double de : {0.5, 1.0, 2.0}) {
            const double e = lambda1 + de;
            const auto sol = decaying_solution(e, p, 1000, lambda1);
            const double mu = decay_rate(sol);
            const double le = lyapunov(e, p, 400000, 12).value;
            worst = std::fmax(worst, std::fabs(mu - le) / le);
        }
    }
    report(6, "decay rate equals Lyapunov", worst <= 0.02,
           fmt("max relative error = %.4f", worst));
}

void criterion7() {
    Timer timer;
    bool ok = true;
    std::string detail;

    const auto pc = Potential::constant(1.0);
    const double oracle = w_star_const_oracle(1.0);
    const auto diag_c = spreading_speed(pc, 200.0, 1200);
    ok = ok && std::fabs(diag_c.fitted_speed - oracle) / oracle <= 0.05;
    ok = ok && diag_c.fitted_speed >= 0.95 * oracle;

    const auto pp = Potential::periodic({0.5, 1.5});
    SpeedOptions sopts;
    sopts.n_iters = 200000;
    sopts.n_phases = 2;
    const auto repp = minimal_speed(pp, sopts);
    const auto diag_p = spreading_speed(pp, 200.0, 1200);
    ok = ok && std::fabs(diag_p.fitted_speed - repp.w_star) / repp.w_star <= 0.05;
    ok = ok && diag_p.fitted_speed >= 0.95 * repp.w_star;

    const double secs = timer.seconds();
    ok = ok && secs < 120.0;
    report(7, "simulated spreading speeds",
           ok,
           fmt("const: %.4f vs %.4f; periodic: %.4f vs %.4f; %.1fs",
               diag_c.fitted_speed, oracle, diag_p.fitted_speed, repp.w_star, secs));
}

void criterion8() {
    struct Case {
        Potential p;
        double de;  // admissible energy offset above lambda1
        std::int64_t left, right;
        const char* name;
    };
    const Case cases[] = {
        {Potential::constant(1.0), 0.4, -340, 70, "constant"},
        {Potential::periodic({0.5, 1.5}), 0.44, -340, 70, "periodic"},
        {Potential::amo(2.0, 5.0, kGolden), 0.6, -400, 90, "amo"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& cs : cases) {
        const double lambda1 = spectral_edge(cs.p, 1e-7).lambda1;
        const double e = lambda1 + cs.de;
        SuperSubOptions sopts;
        sopts.lambda1_hint = lambda1;
        sopts.n_iters = 100000;
        sopts.n_phases = 4;
        const auto pair = build_super_sub(e, cs.p, cs.left, cs.right, sopts);
        PullbackOptions popts;
        popts.t_end = 10.0;
        popts.i_max = 128;
        popts.converge_tol = 1e-10;
        const auto res = pullback_front(pair, cs.p, popts);
        const double target = e / lyapunov(e, cs.p, 400000, 8).value;
        const bool envelope = res.envelope_violation <= popts.sandwich_tol;
        const bool monotone = res.monotone_violation <= 1e-9;
        const bool speed = std::fabs(res.level_speed - target) / target <= 0.05;
        ok = ok && envelope && monotone && speed;
        detail += fmt("%s: env %.1e mono %.1e speed %.3f/%.3f; ", cs.name,
                      res.envelope_violation, res.monotone_violation,
                      res.level_speed, target);
    }
    report(8, "pullback front", ok, detail);
}

void criterion9() {
    const Potential pots[] = {Potential::constant(1.0),
                              Potential::periodic({0.5, 1.5})};
    bool ok = true;
    double worst_res = 0.0, min_gap = 1e300;
    for (const auto& p : pots) {
        const auto ct = critical_front_times(p, 0.25, 20);
        for (std::size_t i = 1; i < ct.s_k.size(); ++i) {
            ok = ok && ct.s_k[i] > ct.s_k[i - 1];
            // consistent with divergence: late gaps stay bounded below
            if (i >= 10) min_gap = std::fmin(min_gap, ct.s_k[i] - ct.s_k[i - 1]);
        }
        for (double r : ct.residuals) worst_res = std::fmax(worst_res, r);
    }
    ok = ok && worst_res <= 1e-6 && min_gap >= 0.1;
    report(9, "critical front times", ok,
           fmt("strictly increasing = %d, max residual = %.2e, late gap >= %.3f",
               ok ? 1 : 0, worst_res, min_gap));
}

void criterion10() {
    KVec k{};
    k[0] = 1;
    const auto p = Potential::quasiperiodic(1, 1.0, {{k, {1e-3, 0.0}}},
                                            {kGolden, 0, 0});
    const auto cert = kam::reduce_at_edge(p);
    bool quad = true;
    for (const auto& st : cert.steps)
        if (st.epsilon_out > 1e-14 &&
            st.epsilon_out > 4.0 * st.epsilon_in * st.epsilon_in)
            quad = false;
    const auto sol =
        kam::positive_solution_from_conjugacy(cert, p, cert.energy, 10000);
    // downstream consistency: a certified positive solution at lambda1 means
    // L must decay toward zero approaching the edge
    double l_prev = 1e300;
    bool l_decreasing = true;
    for (double dj : {0.2, 0.05, 0.0125}) {
        const double l = lyapunov(cert.lambda1 + dj, p, 400000, 8).value;
        if (l >= l_prev) l_decreasing = false;
        l_prev = l;
    }
    const bool l_small = l_prev <= 0.15;  // ~sqrt(delta) at the last probe
    const bool ok = quad && cert.parabolic && cert.residual <= 1e-9 &&
                    sol.residual_max <= 1e-8 &&
                    sol.inf_u >= std::sqrt(2.0) / 4.0 - 0.02 &&
                    cert.rot_drift_max <= 1e-3 && l_decreasing && l_small;
    report(10, "KAM quadratic contraction", ok,
           fmt("steps = %zu, residual = %.1e, eigen-res = %.1e, inf u = %.4f, "
               "rot drift = %.1e, L(edge+0.0125) = %.3f",
               cert.steps.size(), cert.residual, sol.residual_max, sol.inf_u,
               cert.rot_drift_max, l_prev));
}

void criterion11() {
    bool ok = true;
    std::string detail;

    // determinant preservation at n = 1e4
    {
        const auto p = Potential::amo(0.8, 3.0, kGolden);
        const auto orb = cocycle_product(4.0, p, 10000);
        const double err =
            std::fabs(orb.matrix.det() - std::exp(-2.0 * orb.log_scale));
        ok = ok && err <= 1e-10;
        detail += fmt("det %.1e; ", err);
    }

    // comparison principle, 100 random ordered pairs to t = 10
    {
        const auto p = Potential::amo(0.5, 3.0, kGolden);
        std::mt19937_64 rng(101);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            LatticeField lo, hi;
            lo.a = hi.a = 0;
            lo.b = hi.b = 60;
            lo.u.resize(61);
            hi.u.resize(61);
            for (std::size_t i = 0; i < 61; ++i) {
                lo.u[i] = uni(rng);
                hi.u[i] = lo.u[i] + (1.0 - lo.u[i]) * uni(rng);
            }
            lo.bc = {0.2, 0.2};
            hi.bc = {0.8, 0.8};
            integrate(lo, p, 10.0, dt_max(p));
            integrate(hi, p, 10.0, dt_max(p));
            for (std::size_t i = 0; i < 61; ++i)
                worst = std::fmax(worst, lo.u[i] - hi.u[i]);
        }
        ok = ok && worst <= 1e-9;
        detail += fmt("cmp %.1e; ", worst);
    }

    // equilibria preserved
    {
        const auto p = Potential::periodic({0.5, 1.5});
        double worst = 0.0;
        for (double level : {0.0, 1.0}) {
            LatticeField f;
            f.a = 0;
            f.b = 63;
            f.u.assign(64, level);
            f.bc = {level, level};
            integrate(f, p, 100.0, dt_max(p));
            for (double v : f.u) worst = std::fmax(worst, std::fabs(v - level));
        }
        ok = ok && worst <= 1e-12;
        detail += fmt("equil %.1e; ", worst);
    }

    // Lyapunov curve shape and bounds on all three media
    {
        const Potential pots[] = {Potential::constant(1.0),
                                  Potential::periodic({0.5, 1.5}),
                                  Potential::amo(0.8, 3.0, kGolden)};
        bool shapes = true;
        for (const auto& p : pots) {
            const double lambda1 = spectral_edge(p, 1e-6).lambda1;
            std::vector<double> grid;
            for (int i = 0; i < 16; ++i) grid.push_back(lambda1 + 0.1 + 0.62 * i);
            const auto curve = lyapunov_curve(p, grid, 200000, 8);
            shapes = shapes && curve.diagnostics.monotone_ok &&
                     curve.diagnostics.concave_ok && curve.diagnostics.bounds_ok;
        }
        ok = ok && shapes;
        detail += fmt("curve %d", shapes ? 1 : 0);
    }

    report(11, "property suites", ok, detail);
}

}  // namespace

int main() {
    std::printf("kpplab acceptance suite\n");
    run(1, "constant-media Lyapunov oracle", criterion1);
    run(2, "AMO supercritical L = ln 2", criterion2);
    run(3, "AMO subcritical edge", criterion3);
    run(4, "spectral-edge convergence", criterion4);
    run(5, "IDS-rotation identity", criterion5);
    run(6, "decay rate equals Lyapunov", criterion6);
    run(7, "simulated spreading speeds", criterion7);
    run(8, "pullback front", criterion8);
    run(9, "critical front times", criterion9);
    run(10, "KAM quadratic contraction", criterion10);
    run(11, "property suites", criterion11);
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
