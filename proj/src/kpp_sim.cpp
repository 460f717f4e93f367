#include "kpplab/kpp_sim.hpp"

#include <algorithm>
#include <cmath>

#include "kpplab/errors.hpp"
#include "kpplab/spectrum.hpp"

namespace kpplab {

namespace {

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                 double* residual = nullptr) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    if (residual) {
        const double icpt = (sy - slope * sx) / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - slope * xs[i] - icpt;
            ss += r * r;
        }
        *residual = std::sqrt(ss / n);
    }
    return slope;
}

// RK4 stepper over a fixed window with precomputed coefficients. Stage
// ghosts may depend on time (pullback freezes them on the supersolution).
class Stepper {
  public:
    Stepper(LatticeField& f, const Potential& p, const IntegrateOptions& opts)
        : f_(f), opts_(opts), kt_(simd::kernels(opts.mode)) {
        const auto n = static_cast<std::size_t>(f.size());
        c_.resize(n);
        p.fill(f.a, c_);
        for (auto* buf : {&k1_, &k2_, &k3_, &k4_, &tmp_}) buf->resize(n);
    }

    void step(double dt) {
        const auto n = static_cast<std::int64_t>(c_.size());
        const double t = f_.t;
        rhs_into(f_.u, t, k1_);
        kt_.axpy(tmp_.data(), f_.u.data(), k1_.data(), 0.5 * dt, n);
        rhs_into(tmp_, t + 0.5 * dt, k2_);
        kt_.axpy(tmp_.data(), f_.u.data(), k2_.data(), 0.5 * dt, n);
        rhs_into(tmp_, t + 0.5 * dt, k3_);
        kt_.axpy(tmp_.data(), f_.u.data(), k3_.data(), dt, n);
        rhs_into(tmp_, t + dt, k4_);
        kt_.rk4_combine(f_.u.data(), k1_.data(), k2_.data(), k3_.data(),
                        k4_.data(), dt, n);
        f_.t = t + dt;
        check_range();
    }

    void rhs_into(const std::vector<double>& u, double t,
                  std::vector<double>& out) const {
        double gl = f_.bc.left, gr = f_.bc.right;
        if (opts_.ghosts) std::tie(gl, gr) = opts_.ghosts(t);
        kt_.kpp_rhs(u.data(), c_.data(), gl, gr, out.data(),
                    static_cast<std::int64_t>(u.size()));
    }

  private:
    void check_range() const {
        for (double v : f_.u)
            if (v < -opts_.range_tol || v > 1.0 + opts_.range_tol)
                throw RangeViolation("state left [0,1] at t=" +
                                     std::to_string(f_.t) + " (value " +
                                     std::to_string(v) + "); reduce dt");
    }

    LatticeField& f_;
    const IntegrateOptions& opts_;
    const simd::KernelTable& kt_;
    std::vector<double> c_, k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

LatticeField LatticeField::heaviside(std::int64_t a, std::int64_t b,
                                     std::int64_t k) {
    LatticeField f;
    f.a = a;
    f.b = b;
    f.u.assign(static_cast<std::size_t>(b - a + 1), 0.0);
    for (std::int64_t n = a; n <= b; ++n)
        if (n <= -k) f.at(n) = 1.0;
    return f;
}

std::vector<double> rhs(const LatticeField& f, const Potential& p,
                        simd::Mode mode) {
    std::vector<double> c(static_cast<std::size_t>(f.size()));
    p.fill(f.a, c);
    std::vector<double> out(c.size());
    simd::kernels(mode).kpp_rhs(f.u.data(), c.data(), f.bc.left, f.bc.right,
                                out.data(), static_cast<std::int64_t>(c.size()));
    return out;
}

double dt_max(const Potential& p) { return 0.1 / (4.0 + p.sup_bound()); }

void integrate(LatticeField& f, const Potential& p, double t_end, double dt,
               const IntegrateOptions& opts) {
    if (t_end <= f.t) throw Error("integrate: t_end must exceed the current time");
    if (dt > dt_max(p) * (1.0 + 1e-12))
        throw Error("integrate: dt exceeds the stability ceiling 0.1/(4+sup c)");
    Stepper st(f, p, opts);
    if (opts.observer) opts.observer(f);
    while (f.t < t_end - 1e-12) {
        const double h = std::fmin(dt, t_end - f.t);
        st.step(h);
        if (opts.observer) opts.observer(f);
    }
}

std::optional<std::int64_t> front_position(const LatticeField& f, double theta) {
    for (std::int64_t n = f.b; n >= f.a; --n)
        if (f.at(n) >= theta) return n;
    return std::nullopt;
}

FrontDiagnostics spreading_speed(
    const Potential& p, double t_end, std::int64_t window, double theta_level,
    simd::Mode mode, const std::function<void(const LatticeField&)>& observer) {
    const std::int64_t margin_left = std::min<std::int64_t>(100, window / 8);
    LatticeField f = LatticeField::heaviside(-margin_left, window - margin_left);
    FrontDiagnostics diag;
    diag.theta_level = theta_level;

    IntegrateOptions opts;
    opts.mode = mode;
    opts.observer = [&](const LatticeField& g) {
        const auto pos = front_position(g, theta_level);
        if (!pos)
            throw BoundaryContamination("front lost below level theta");
        if (*pos > g.b - 50)
            throw BoundaryContamination(
                "front reached the 50-site right margin at t=" +
                std::to_string(g.t));
        diag.times.push_back(g.t);
        diag.n_of_t.push_back(*pos);
        if (observer) observer(g);
    };
    integrate(f, p, t_end, dt_max(p), opts);

    std::vector<double> xs, ys;
    for (std::size_t i = diag.times.size() / 2; i < diag.times.size(); ++i) {
        xs.push_back(diag.times[i]);
        ys.push_back(static_cast<double>(diag.n_of_t[i]));
    }
    diag.fitted_speed = lsq_slope(xs, ys, &diag.fit_residual);
    return diag;
}

double SuperSubPair::bar_u(double t, std::int64_t n) const {
    const double lz = phi.log_phi_at(n) + E * t;
    return (lz >= 0.0) ? 1.0 : std::exp(lz);
}

double SuperSubPair::under_u(double t, std::int64_t n) const {
    const double lz = phi.log_phi_at(n) + E * t;
    const double z = std::exp(lz);
    const double q = amplitude_A * theta_at(n) * std::exp((1.0 + epsilon) * lz);
    return std::fmax(0.0, z - q);
}

SuperSubPair build_super_sub(double E, const Potential& p, std::int64_t a,
                             std::int64_t b, const SuperSubOptions& opts) {
    SuperSubPair pair;
    pair.E = E;
    pair.a = a;
    pair.b = b;
    pair.lambda1 = std::isnan(opts.lambda1_hint)
                       ? spectral_edge(p, 1e-7).lambda1
                       : opts.lambda1_hint;
    if (E <= pair.lambda1)
        throw Error("build_super_sub: E must be above lambda1");

    const double LE = lyapunov(E, p, opts.n_iters, opts.n_phases).value;

    // epsilon with the widest margin in E/L(E) > (1+eps)E/L((1+eps)E).
    double best_gap = 0.0;
    double eps = 0.0;
    for (double e : opts.eps_grid) {
        const double le2 = lyapunov((1.0 + e) * E, p, opts.n_iters, opts.n_phases).value;
        const double gap = E / LE - (1.0 + e) * E / le2;
        if (gap > best_gap) {
            best_gap = gap;
            eps = e;
        }
    }
    if (eps == 0.0)
        throw NoEpsilon("no eps in (0,1) with E/L(E) > (1+eps)E/L((1+eps)E); "
                        "E/L may be too close to its limit at the edge");
    pair.epsilon = eps;

    // kappa solves 1/L(E) = (1+eps)/L(E+kappa) in (0, eps E) by bisection;
    // F is continuous with a sign change by concavity of L.
    auto F = [&](double kappa) {
        return 1.0 / LE -
               (1.0 + eps) / lyapunov(E + kappa, p, opts.n_iters, opts.n_phases).value;
    };
    double lo = 0.0, hi = eps * E;
    if (F(hi) <= 0.0)
        throw NoEpsilon("kappa bracket failed at eps*E");
    for (int it = 0; it < 40 && hi - lo > 1e-4 * eps * E; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) < 0.0 ? lo : hi) = mid;
    }
    pair.kappa = 0.5 * (lo + hi);

    const std::int64_t n_w = std::max(std::llabs(a), std::llabs(b)) + 2;
    pair.phi = decaying_solution(E, p, n_w, pair.lambda1);
    pair.phi_kappa = decaying_solution(E + pair.kappa, p, n_w, pair.lambda1);

    // theta = phi_{E+kappa} / phi_E^{1+eps}: the exact positive solution of
    // the weighted operator at spectral value E + kappa, with vanishing
    // exponential rate by the choice of kappa. It satisfies the differential
    // inequality with any delta < eps E - kappa.
    pair.collar = (opts.collar > 0) ? opts.collar
                                    : std::max<std::int64_t>(8, (b - a) / 20);
    pair.theta.resize(static_cast<std::size_t>(b - a + 1));
    double inf_theta = 1e300, sup_theta = 0.0;
    for (std::int64_t n = a; n <= b; ++n) {
        const double lt = pair.phi_kappa.log_phi_at(n) -
                          (1.0 + eps) * pair.phi.log_phi_at(n);
        const double th = std::exp(lt);
        pair.theta[static_cast<std::size_t>(n - a)] = th;
        if (pair.in_core(n)) {
            inf_theta = std::fmin(inf_theta, th);
            sup_theta = std::fmax(sup_theta, th);
        }
    }
    if (!(inf_theta > 0.0))
        throw WeightVerificationFailed("theta weight not positive on the core");

    pair.delta_cert = eps * E - pair.kappa;
    if (pair.delta_cert <= 0.0)
        throw NoEpsilon("eps*E - kappa not positive");

    // Pointwise check of -L^{(1+eps)sigma} theta >= (delta - (1+eps)E) theta
    // on the collar-trimmed window.
    {
        std::vector<std::int64_t> bad;
        for (std::int64_t n = a + 1; n <= b - 1; ++n) {
            const double s_n = (1.0 + eps) * (pair.phi.log_phi_at(n) -
                                              pair.phi.log_phi_at(n + 1));
            const double s_nm1 = (1.0 + eps) * (pair.phi.log_phi_at(n - 1) -
                                                pair.phi.log_phi_at(n));
            const double weighted =
                std::exp(-s_n) * pair.theta_at(n + 1) +
                std::exp(s_nm1) * pair.theta_at(n - 1) +
                (p.eval(n) - 2.0) * pair.theta_at(n);
            const double bound = ((1.0 + eps) * E - pair.delta_cert) * pair.theta_at(n);
            if (weighted > bound + opts.verify_tol * std::fabs(bound) &&
                pair.in_core(n))
                bad.push_back(n);
        }
        if (!bad.empty())
            throw WeightVerificationFailed(
                "weighted inequality failed at " + std::to_string(bad.size()) +
                " core sites, first n=" + std::to_string(bad.front()));
    }

    // Amplitude bound sup(c)^eps / (delta^eps inf theta), doubled for strict
    // residual margins.
    pair.amplitude_A = 2.0 * std::pow(p.sup_bound(), eps) /
                       (std::pow(pair.delta_cert, eps) * inf_theta);

    // Residual verification of the pair on sampled (t, n).
    const double t_hi = -pair.phi.log_phi_at(b - pair.collar) / E;
    const double t_lo = -pair.phi.log_phi_at(a + pair.collar) / E;
    double max_super = 0.0, max_sub = 0.0;
    for (int ti = 0; ti <= 100; ++ti) {
        const double t = t_lo + (t_hi - t_lo) * ti / 100.0;
        for (std::int64_t n = a + pair.collar; n <= b - pair.collar; ++n) {
            const double c_n = p.eval(n);
            // supersolution residual (>= 0 required)
            {
                const double uc = pair.bar_u(t, n);
                const double ut = (pair.phi.log_phi_at(n) + E * t < 0.0)
                                      ? E * uc
                                      : 0.0;
                const double res = ut - pair.bar_u(t, n + 1) -
                                   pair.bar_u(t, n - 1) + 2.0 * uc -
                                   c_n * uc * (1.0 - uc);
                max_super = std::fmax(max_super, -res);
            }
            // subsolution residual (<= 0 required where under_u > 0)
            {
                const double uc = pair.under_u(t, n);
                if (uc > 0.0) {
                    const double lz = pair.phi.log_phi_at(n) + E * t;
                    const double ut =
                        E * std::exp(lz) -
                        (1.0 + eps) * E * pair.amplitude_A * pair.theta_at(n) *
                            std::exp((1.0 + eps) * lz);
                    const double res = ut - pair.under_u(t, n + 1) -
                                       pair.under_u(t, n - 1) + 2.0 * uc -
                                       c_n * uc * (1.0 - uc);
                    max_sub = std::fmax(max_sub, res);
                }
                if (!(pair.under_u(t, n) <= pair.bar_u(t, n) + 1e-12) ||
                    !(pair.under_u(t, n) < 1.0))
                    throw WeightVerificationFailed(
                        "sub/supersolution ordering failed");
            }
        }
    }
    if (max_super > opts.verify_tol)
        throw WeightVerificationFailed("supersolution residual " +
                                       std::to_string(max_super));
    if (max_sub > opts.verify_tol)
        throw WeightVerificationFailed("subsolution residual " +
                                       std::to_string(max_sub));
    return pair;
}

PullbackResult pullback_front(const SuperSubPair& pair, const Potential& p,
                              const PullbackOptions& opts) {
    PullbackResult out;
    const double dt = (opts.dt > 0.0) ? opts.dt : 0.5 * dt_max(p);
    // Snapshots land on a fixed poll grid so successive pullbacks compare
    // state-by-state.
    const double poll = 0.1;
    std::vector<double> poll_times;
    for (double t = 0.0; t <= opts.t_end + 1e-9; t += poll) poll_times.push_back(t);

    std::vector<std::vector<double>> prev_states;
    int i = 4;
    while (true) {
        LatticeField f;
        f.a = pair.a;
        f.b = pair.b;
        f.t = -static_cast<double>(i);
        f.u.resize(static_cast<std::size_t>(f.size()));
        for (std::int64_t n = f.a; n <= f.b; ++n) f.at(n) = pair.bar_u(f.t, n);

        IntegrateOptions iopts;
        iopts.mode = opts.mode;
        iopts.ghosts = [&](double t) {
            return std::pair<double, double>{pair.bar_u(t, pair.a - 1),
                                             pair.bar_u(t, pair.b + 1)};
        };

        std::vector<double> last_u;
        double last_t = -1e300;
        double env_viol = 0.0, mono_viol = 0.0;
        std::int64_t step_count = 0;
        iopts.observer = [&](const LatticeField& g) {
            // Monotonicity in t holds for the converged front; the checked
            // range t >= -1 matches the restriction of the returned run.
            if (!last_u.empty() && last_t >= -1.0) {
                for (std::size_t j = 0; j < g.u.size(); ++j)
                    mono_viol = std::fmax(mono_viol, last_u[j] - g.u[j]);
            }
            last_t = g.t;
            last_u = g.u;
            if (step_count % opts.save_stride == 0) {
                for (std::int64_t n = g.a + pair.collar; n <= g.b - pair.collar;
                     ++n) {
                    env_viol = std::fmax(env_viol, pair.under_u(g.t, n) - g.at(n));
                    env_viol = std::fmax(env_viol, g.at(n) - pair.bar_u(g.t, n));
                }
            }
            ++step_count;
        };

        std::vector<double> times;
        std::vector<std::vector<double>> states;
        for (double tp : poll_times) {
            if (tp > f.t + 1e-12) integrate(f, p, tp, dt, iopts);
            times.push_back(f.t);
            states.push_back(f.u);
        }

        if (env_viol > opts.sandwich_tol)
            throw SandwichViolation("pullback solution left the envelope by " +
                                    std::to_string(env_viol));
        // Every pullback must stay in the envelope; monotonicity in t is a
        // property of the converged front, so only the final run counts.
        out.envelope_violation = std::fmax(out.envelope_violation, env_viol);
        out.monotone_violation = mono_viol;

        double gap = 1e300;
        if (prev_states.size() == states.size()) {
            gap = 0.0;
            for (std::size_t s = 0; s < states.size(); ++s)
                for (std::size_t j = 0; j < states[s].size(); ++j)
                    gap = std::fmax(gap,
                                    std::fabs(states[s][j] - prev_states[s][j]));
        }
        out.converge_gap = gap;
        out.i_used = i;
        prev_states = states;
        if (gap <= opts.converge_tol || i >= opts.i_max) {
            out.times = std::move(times);
            out.states = std::move(states);
            break;
        }
        i *= 2;
    }

    // theta = 1/4 level-crossing speed from the stored snapshots, and the
    // drift of tau_n against the front parametrization t(n;g).
    std::vector<double> xs, ys, offsets;
    for (std::int64_t n = pair.a + pair.collar; n <= pair.b - pair.collar; ++n) {
        for (std::size_t s = 1; s < out.states.size(); ++s) {
            const double u0 = out.states[s - 1][static_cast<std::size_t>(n - pair.a)];
            const double u1 = out.states[s][static_cast<std::size_t>(n - pair.a)];
            if (u0 < 0.25 && u1 >= 0.25) {
                const double tau = out.times[s - 1] +
                                   (out.times[s] - out.times[s - 1]) *
                                       (0.25 - u0) / (u1 - u0);
                if (tau > 0.2 && tau < opts.t_end - 0.2) {
                    xs.push_back(tau);
                    ys.push_back(static_cast<double>(n));
                    out.level_crossings.emplace_back(n, tau);
                    offsets.push_back(tau - pair.phi.level_time(n));
                }
                break;
            }
        }
    }
    if (xs.size() >= 4) out.level_speed = lsq_slope(xs, ys);
    if (!offsets.empty()) {
        double mean = 0.0;
        for (double v : offsets) mean += v;
        mean /= static_cast<double>(offsets.size());
        for (double v : offsets)
            out.level_time_spread = std::fmax(out.level_time_spread,
                                              std::fabs(v - mean));
    }
    return out;
}

CriticalTimes critical_front_times(const Potential& p, double theta, int k_max,
                                   const CriticalTimesOptions& opts) {
    if (theta <= 0.0 || theta >= 1.0)
        throw Error("critical_front_times requires theta in (0,1)");
    CriticalTimes out;
    out.theta = theta;
    const double dt = (opts.dt > 0.0) ? opts.dt : dt_max(p);
    const std::int64_t a = (opts.window_left != 0)
                               ? opts.window_left
                               : -(static_cast<std::int64_t>(k_max) + 80);
    const std::int64_t b = opts.window_right;

    for (int k = 1; k <= k_max; ++k) {
        LatticeField f = LatticeField::heaviside(a, b, k);
        IntegrateOptions iopts;
        iopts.mode = opts.mode;
        Stepper st(f, p, iopts);

        LatticeField before = f;
        bool crossed = false;
        while (f.t < opts.t_cap) {
            before = f;
            st.step(dt);
            const auto pos = front_position(f, theta);
            if (pos && *pos > f.b - 50)
                throw BoundaryContamination("front reached the right margin");
            if (f.at(0) >= theta) {
                crossed = true;
                break;
            }
        }
        if (!crossed)
            throw LevelNeverReached("u(t,0) stayed below theta up to t_cap for k=" +
                                    std::to_string(k));

        // One bisection pass of the integrator inside the bracketing step.
        double lo = 0.0, hi = f.t - before.t;
        while (hi - lo > opts.crossing_tol) {
            const double mid = 0.5 * (lo + hi);
            LatticeField g = before;
            Stepper sg(g, p, iopts);
            const int sub = 8;
            for (int s = 0; s < sub; ++s) sg.step(mid / sub);
            (g.at(0) >= theta ? hi : lo) = mid;
        }
        const double s_k = before.t + 0.5 * (lo + hi);
        out.s_k.push_back(s_k);

        // Re-evaluate u(s_k, 0) with a fresh integration landing on s_k.
        LatticeField h = LatticeField::heaviside(a, b, k);
        integrate(h, p, s_k, dt, iopts);
        out.residuals.push_back(std::fabs(h.at(0) - theta));
    }
    return out;
}

}  // namespace kpplab
