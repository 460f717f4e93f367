#pragma once

#include <cstdint>
#include <vector>

#include "kpplab/potentials.hpp"

namespace kpplab {

// Symmetric tridiagonal restriction of L_g to the window [a, b] with zero
// (Dirichlet) boundary conditions: diagonal c(n) - 2, off-diagonals 1.
struct TruncatedOperator {
    const Potential* pot = nullptr;
    std::int64_t a = 0, b = 0;

    std::int64_t dim() const { return b - a + 1; }
    double diag(std::int64_t n) const { return pot->eval(n) - 2.0; }
};

// Number of eigenvalues strictly below E (Sturm/LDL^T sign count with
// pivot-zero perturbation).
std::int64_t sturm_count(const TruncatedOperator& op, double E);

// Largest eigenvalue of the restriction to (-N, N), bisection on the Sturm
// count to absolute tolerance tol.
double lambda1_truncated(const Potential& p, std::int64_t N, double tol = 1e-12);

struct SpectralEdge {
    double lambda1 = 0.0;
    std::vector<std::int64_t> window_sizes;
    std::vector<double> lambda1_per_N;
    double extrapolation_error = 0.0;
    bool uh_check = false;   // cocycle uniformly hyperbolic just right of the edge
    bool rot_check = false;  // rotation number vanishes just right of the edge
};

// Doubles N until successive lambda1^N values differ by less than tol, then
// applies the one-step correction lambda1^N + (lambda1^N - lambda1^{N/2});
// truncated windows converge monotonically from below, so the correction is
// safe. Cross-checks hyperbolicity and rotation at lambda1 + 10 tol.
SpectralEdge spectral_edge(const Potential& p, double tol,
                           std::int64_t n_start = 50,
                           std::int64_t n_cap = (std::int64_t{1} << 17));

struct IdsPoint {
    double E = 0.0;
    double k = 0.0;
    std::int64_t window_size = 0;
};

// Integrated density of states from the eigenvalue count of the centered
// window (-N, N).
IdsPoint ids(const Potential& p, double E, std::int64_t N);

}  // namespace kpplab
