#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "kpplab/cocycle.hpp"
#include "kpplab/potentials.hpp"
#include "kpplab/spectrum.hpp"

namespace kpplab {

// Positive solution phi_E of L_g phi = E phi with phi(0) = 1 decaying to the
// right, stored as log phi on [-N_w, N_w]. For E above the spectral edge the
// decay rate equals the Lyapunov exponent.
struct DecaySolution {
    double E = 0.0;
    std::int64_t n_w = 0;
    std::vector<double> log_phi;  // index i <-> site i - n_w
    double residual_max = 0.0;

    double log_phi_at(std::int64_t n) const {
        return log_phi[static_cast<std::size_t>(n + n_w)];
    }
    double phi(std::int64_t n) const { return std::exp(log_phi_at(n)); }
    // Front time parametrization t(k;g) = -(1/E) log phi_E(k).
    double level_time(std::int64_t n) const { return -log_phi_at(n) / E; }
};

DecaySolution decaying_solution(double E, const Potential& p, std::int64_t n_w,
                                double lambda1_hint = std::nan(""),
                                double margin = 1e-3);

// sigma_E(n) = -log(phi(n+1)/phi(n)) on [-N_w, N_w - 1].
struct SigmaSequence {
    std::int64_t n_w = 0;
    std::vector<double> values;

    double at(std::int64_t n) const {
        return values[static_cast<std::size_t>(n + n_w)];
    }
};

SigmaSequence sigma(const DecaySolution& sol);

// Least-squares decay slope of -log phi over the right half-window; the
// left-half variant measures the leftward growth rate.
double decay_rate(const DecaySolution& sol);
double decay_rate_left(const DecaySolution& sol);

struct CurveDiagnostics {
    bool monotone_ok = false;
    bool concave_ok = false;
    bool bounds_ok = false;  // 0 < L <= sqrt(E - inf c) within noise
};

struct LyapunovCurve {
    std::vector<LyapunovEstimate> points;
    CurveDiagnostics diagnostics;
};

// Grid evaluation is data-parallel; workers is the CLI worker-count hint.
LyapunovCurve lyapunov_curve(const Potential& p,
                             const std::vector<double>& e_grid,
                             std::int64_t n_iters, int n_phases,
                             int workers = 1);

struct SpeedOptions {
    double edge_tol = 1e-7;
    std::int64_t n_iters = 400000;
    int n_phases = 12;
    std::vector<double> edge_deltas = {0.2, 0.05, 0.0125};
    double l_floor = 1e-3;    // extrapolated L(edge) below this flags w = inf
    double ratio_cap = 1e4;   // ... as does E/L beyond this
    double e_span = 0.0;      // 0: automatic
    int grid_points = 48;
    double golden_tol = 1e-4;
    int workers = 1;
};

struct SpeedReport {
    double lambda1 = 0.0;
    double e_star = 0.0;
    double w_star = 0.0;
    double underline_w = 0.0;          // meaningful when !underline_w_infinite
    bool underline_w_infinite = false;
    double l_at_edge = 0.0;            // extrapolated limit of L at the edge
    LyapunovCurve curve;
    bool bracket_warning = false;      // E/L monotone on the search interval
};

// w* = inf_{E > lambda1} E/L(E) by coarse grid + golden-section refinement
// (leftmost minimizer on plateaus); underline w from Richardson/Aitken
// extrapolation of L at lambda1 + delta_j.
SpeedReport minimal_speed(const Potential& p, const SpeedOptions& opts = {});

}  // namespace kpplab
