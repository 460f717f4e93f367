#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "kpplab/kam/series.hpp"
#include "kpplab/mat2.hpp"
#include "kpplab/potentials.hpp"

namespace kpplab::kam {

struct KamConfig {
    // Smallness condition eps < small_c (r - r')^{6(1+delta)tau} / |A|^6.
    // The constant is empirical, calibrated so the quadratic tail of the
    // shrinking-strip schedule stays admissible; no constructive value is
    // known for it.
    double small_c = 1e17;
    double delta = 0.5;
    double tau = 1.5;
    double divisor_floor = 1e-6;
    int k_cap = 256;
    double target_eps = 1e-15;
    int max_steps = 24;
    double r0 = 1.0;
    double r_final_frac = 0.5;
    double parabolic_tol = 1e-6;
    double inconclusive_tol = 1e-4;
    double edge_tol = 1e-9;
    std::int64_t rot_iters = 20000;
    int residual_grid = 512;
};

struct KamStepReport {
    double epsilon_in = 0.0;
    double epsilon_out = 0.0;
    double norm_y = 0.0;
    Mat2 a_before, a_after;
    double k_used = 0.0;
};

// Schur eigenform A = Q T Q* with unitary Q and T = [[mu, p],[0, 1/mu]].
struct TriangularForm {
    cplx mu, mu2, p;
    Mat2c q;
};

TriangularForm triangular_form(const Mat2& a);

// Solves A^{-1} Y(theta+alpha) A - Y(theta) = G(theta) mode by mode for the
// nonzero modes of G with |k|_1 < K, with hat Y(0) = 0. The caller's matrix
// is conjugated into its triangular eigenform internally, where the solution
// is the displayed triangular system over the small divisors
// e^{2 pi i <k,alpha>} mu^{+-2} - 1. Throws SmallDivisor naming the first
// offending mode when a divisor falls below the floor.
FourierMatrixSeries homological_solve(const Mat2& a,
                                      const FourierMatrixSeries& g,
                                      const Torus& alpha, double K,
                                      double divisor_floor);

struct KamStepResult {
    FourierMatrixSeries y;
    Mat2 a_next;
    FourierMatrixSeries f_next;
    KamStepReport report;
};

// One quadratic step e^{-Y(theta+alpha)} A e^{F(theta)} e^{Y(theta)} =
// A' e^{F'(theta)} with K = 2 |ln eps| / (r - r_next).
KamStepResult kam_step(const Mat2& a, const FourierMatrixSeries& f,
                       const Torus& alpha, double r, double r_next,
                       const KamConfig& cfg = {});

struct ReducibilityCertificate {
    FourierMatrixSeries b;  // composed conjugacy, B = e^{Y_1} ... e^{Y_m}
    Mat2 a_tilde;
    double residual = 0.0;  // sup_theta |B(theta+alpha)^{-1} S(theta) B(theta) - A~|
    bool parabolic = false;
    bool inconclusive = false;
    double distance_to_identity = 0.0;
    double rot_drift_max = 0.0;  // worst rotation drift along the conjugation
    std::vector<KamStepReport> steps;
    double energy = 0.0;
    double lambda1 = 0.0;
    Torus alpha{};
    int dim = 1;
};

// Full reduction of the Schrodinger cocycle at the spectral edge. E defaults
// (NaN) to the computed lambda1. Writes S_E^V = A e^F with A the constant
// part and F = [[0,0],[V_osc,0]], then iterates kam_step on the shrinking
// strip schedule until the target accuracy.
ReducibilityCertificate reduce_at_edge(const Potential& p,
                                       double energy = std::nan(""),
                                       const KamConfig& cfg = {});

struct PositiveSolution {
    std::int64_t a = 0;
    std::vector<double> u;
    double residual_max = 0.0;
    double inf_u = 0.0;
    double eta = 0.0;      // rotation angle of the parabolic normal form
    double p_entry = 0.0;  // off-diagonal entry of the normal form
};

// Extracts the positive almost-periodic solution u(n) = C11(n alpha + theta)
// (or C21, per the case analysis) from a parabolic certificate with
// |B - id| <= 1/100, and verifies the eigenvalue equation on the window.
PositiveSolution positive_solution_from_conjugacy(
    const ReducibilityCertificate& cert, const Potential& p, double energy,
    std::int64_t window);

}  // namespace kpplab::kam
