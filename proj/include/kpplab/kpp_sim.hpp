#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kpplab/frontspeed.hpp"
#include "kpplab/potentials.hpp"
#include "kpplab/simd/dispatch.hpp"

namespace kpplab {

// Frozen ghost values outside the window; the infinite-lattice tails of
// Heaviside-type data are exact as long as the front keeps its distance
// (the 50-site contamination margin checked by the drivers).
struct BoundaryPolicy {
    double left = 1.0;
    double right = 0.0;
};

struct LatticeField {
    std::int64_t a = 0, b = 0;  // window [a, b]
    std::vector<double> u;
    double t = 0.0;
    BoundaryPolicy bc;

    std::int64_t size() const { return b - a + 1; }
    double& at(std::int64_t n) { return u[static_cast<std::size_t>(n - a)]; }
    double at(std::int64_t n) const { return u[static_cast<std::size_t>(n - a)]; }

    static LatticeField heaviside(std::int64_t a, std::int64_t b,
                                  std::int64_t k = 0);
};

std::vector<double> rhs(const LatticeField& f, const Potential& p,
                        simd::Mode mode = simd::Mode::Auto);

// Stability ceiling for the fixed-step RK4 integrator.
double dt_max(const Potential& p);

struct IntegrateOptions {
    simd::Mode mode = simd::Mode::Auto;
    // Optional time-dependent ghost override (left, right); pullback runs
    // freeze the ghosts onto the supersolution.
    std::function<std::pair<double, double>(double)> ghosts;
    double range_tol = 1e-9;
    // Called after every accepted step.
    std::function<void(const LatticeField&)> observer;
};

// Classical RK4 with a final partial step landing exactly on t_end. The
// state must stay in [-range_tol, 1+range_tol]; violations throw instead of
// clamping.
void integrate(LatticeField& f, const Potential& p, double t_end, double dt,
               const IntegrateOptions& opts = {});

// N(t) = sup{ n : u(t,n) >= theta }, empty when no site qualifies.
std::optional<std::int64_t> front_position(const LatticeField& f, double theta);

struct FrontDiagnostics {
    std::vector<double> times;
    std::vector<std::int64_t> n_of_t;
    double theta_level = 0.25;
    double fitted_speed = 0.0;
    double fit_residual = 0.0;
};

// Heaviside release (1 for n <= 0) on [-margin_left, window - margin_left],
// front position recorded each step, speed fitted over the last half of the
// time range. Throws BoundaryContamination when the front comes within 50
// sites of the right edge.
FrontDiagnostics spreading_speed(
    const Potential& p, double t_end, std::int64_t window,
    double theta_level = 0.25, simd::Mode mode = simd::Mode::Auto,
    const std::function<void(const LatticeField&)>& observer = nullptr);

struct SuperSubOptions {
    double lambda1_hint = std::nan("");
    std::int64_t n_iters = 200000;
    int n_phases = 8;
    std::vector<double> eps_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double verify_tol = 1e-9;
    std::int64_t collar = 0;  // 0: automatic (max(8, W/10))
};

// Super/sub-solution pair around phi_E: bar_u = min{1, phi_E e^{Et}},
// under_u = max{0, phi_E e^{Et} - A theta phi_E^{1+eps} e^{(1+eps)Et}}.
// theta is the Perron eigenvector of the truncated sigma-weighted operator;
// the differential inequality it must satisfy is verified pointwise on the
// collar-trimmed window.
struct SuperSubPair {
    double E = 0.0;
    double epsilon = 0.0;
    double kappa = 0.0;
    double amplitude_A = 0.0;
    double delta_cert = 0.0;  // certified spectral gap of the weighted operator
    double lambda1 = 0.0;
    std::int64_t a = 0, b = 0, collar = 0;
    DecaySolution phi;
    DecaySolution phi_kappa;
    std::vector<double> theta;

    double theta_at(std::int64_t n) const {
        return theta[static_cast<std::size_t>(n - a)];
    }
    double bar_u(double t, std::int64_t n) const;
    double under_u(double t, std::int64_t n) const;
    bool in_core(std::int64_t n) const {
        return n >= a + collar && n <= b - collar;
    }
};

SuperSubPair build_super_sub(double E, const Potential& p, std::int64_t a,
                             std::int64_t b, const SuperSubOptions& opts = {});

struct PullbackOptions {
    int i_max = 64;
    double t_end = 12.0;
    double dt = 0.0;          // 0: automatic
    double sandwich_tol = 1e-5;
    double converge_tol = 1e-7;
    double monotone_tol = 1e-9;
    std::int64_t save_stride = 10;
    simd::Mode mode = simd::Mode::Auto;
};

struct PullbackResult {
    std::vector<double> times;                 // snapshot times of final run
    std::vector<std::vector<double>> states;   // snapshots on [a, b]
    double i_used = 0.0;
    double envelope_violation = 0.0;           // worst excursion outside [under, bar]
    double monotone_violation = 0.0;           // worst negative time increment
    double converge_gap = 0.0;                 // sup gap between last two pullbacks
    double level_speed = 0.0;                  // theta = 1/4 level-set speed
    // Crossing times tau_n of the 1/4 level and their drift against the
    // front parametrization t(n;g) = -(1/E) log phi_E(n): tau_n - t(n) is
    // recurrent (constant in homogeneous media), so its spread around the
    // mean measures the front-time consistency.
    std::vector<std::pair<std::int64_t, double>> level_crossings;
    double level_time_spread = 0.0;
};

// Pullback construction of the front: integrate from t = -i with initial
// condition bar_u(-i, .), doubling i until successive solutions agree to
// converge_tol on [0, t_end].
PullbackResult pullback_front(const SuperSubPair& pair, const Potential& p,
                              const PullbackOptions& opts = {});

struct CriticalTimesOptions {
    std::int64_t window_left = 0;   // 0: automatic
    std::int64_t window_right = 120;
    double dt = 0.0;                // 0: automatic
    double t_cap = 400.0;
    double crossing_tol = 1e-8;
    simd::Mode mode = simd::Mode::Auto;
};

struct CriticalTimes {
    double theta = 0.0;
    std::vector<double> s_k;       // k = 1..k_max
    std::vector<double> residuals; // |u(s_k, 0) - theta| on re-evaluation
};

// s_k = min{ s : u(s, 0; 0, H_k) = theta } with H_k = 1 on n <= -k; the
// crossing is bracketed at dt resolution and refined by re-integration.
CriticalTimes critical_front_times(const Potential& p, double theta, int k_max,
                                   const CriticalTimesOptions& opts = {});

}  // namespace kpplab
