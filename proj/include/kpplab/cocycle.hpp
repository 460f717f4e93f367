#pragma once

#include <cstdint>
#include <functional>

#include "kpplab/mat2.hpp"
#include "kpplab/potentials.hpp"
#include "kpplab/simd/dispatch.hpp"

namespace kpplab {

// Schrodinger transfer matrix A(n) = [E+2-c(n), -1; 1, 0]; det == 1 exactly.
Mat2 transfer_matrix(double E, const Potential& p, std::int64_t n);

// Renormalized product A(n-1)...A(0). exp(log_scale)*matrix reconstructs the
// exact product up to floating error; negative n yields A_{-n} = A_n(g.(-n))^{-1}.
struct CocycleOrbit {
    double E = 0.0;
    double log_scale = 0.0;
    Mat2 matrix;
    std::int64_t length = 0;

    Mat2 reconstruct() const { return std::exp(log_scale) * matrix; }
    double log_norm() const { return log_scale + std::log(matrix.op_norm()); }
};

CocycleOrbit cocycle_product(double E, const Potential& p, std::int64_t n);

struct LyapunovEstimate {
    double E = 0.0;
    double value = 0.0;
    std::int64_t n_iters = 0;
    int phases_averaged = 0;
    double std_error = 0.0;
};

// L(E) averaged over equispaced hull translates. The per-phase estimate uses
// the two-scale difference (log|A_n| - log|A_{n/2}|)/(n/2), which cancels the
// O(1/n) prefactor bias of the raw Birkhoff quotient.
LyapunovEstimate lyapunov(double E, const Potential& p, std::int64_t n_iters,
                          int n_phases, simd::Mode mode = simd::Mode::Auto);

struct RotationEstimate {
    double E = 0.0;
    double rho = 0.0;  // in [0, 1/2]
    std::int64_t iters = 0;
};

// Fibered rotation number of the Schrodinger cocycle, normalized so that
// k(E) = 1 - 2*rho. Computed from the winding of the projectivized orbit,
// counted at its transversal crossings of the vertical direction (the sign
// changes of the solution), which fixes the lift branch at every energy.
RotationEstimate rotation_number(double E, const Potential& p,
                                 std::int64_t n_iters);

// Rotation number of a general SL(2,R) cocycle sequence from lifted-angle
// increments of v -> M(n)v/|M(n)v|, folded into [0, 1/2]. Requires per-step
// increments away from the +-pi branch cut; Schrodinger energies deep below
// the spectrum should use rotation_number instead.
double rotation_winding(const std::function<Mat2(std::int64_t)>& step,
                        std::int64_t n);

// Rotation number of the constant cocycle (alpha, A), closed form.
double rotation_of_constant(const Mat2& A);

struct UhReport {
    bool hyperbolic = false;
    bool inconclusive = false;
    double growth = 0.0;     // mean log expansion per step
    double min_angle = 0.0;  // worst stable/unstable splitting angle seen
};

// Finite-length certificate for uniform hyperbolicity: total expansion at
// least e^20, geometric convergence of the most-contracted singular
// directions, splitting angle floor 1e-6. Growth without a certified
// splitting reports inconclusive.
UhReport is_uniformly_hyperbolic(double E, const Potential& p,
                                 std::int64_t n_test);

}  // namespace kpplab
