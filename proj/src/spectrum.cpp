#include "kpplab/spectrum.hpp"

#include <cmath>
#include <vector>

#include "kpplab/cocycle.hpp"
#include "kpplab/errors.hpp"

namespace kpplab {

std::int64_t sturm_count(const TruncatedOperator& op, double E) {
    std::int64_t count = 0;
    double q = 1.0;
    for (std::int64_t n = op.a; n <= op.b; ++n) {
        q = (n == op.a) ? op.diag(n) - E : op.diag(n) - E - 1.0 / q;
        if (q == 0.0) q = -1e-300;  // pivot-zero perturbation
        if (q < 0.0) ++count;
    }
    return count;
}

double lambda1_truncated(const Potential& p, std::int64_t N, double tol) {
    if (N < 1) throw Error("lambda1_truncated requires N >= 1");
    TruncatedOperator op{&p, -N + 1, N - 1};
    const std::int64_t dim = op.dim();
    // Gershgorin bracket: diag in [inf c - 2, sup c - 2], off-diagonals 1.
    double lo = p.inf_bound() - 4.0;
    double hi = p.sup_bound();
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(op, mid) >= dim)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

SpectralEdge spectral_edge(const Potential& p, double tol, std::int64_t n_start,
                           std::int64_t n_cap) {
    if (tol <= 0.0) throw Error("spectral_edge requires tol > 0");
    SpectralEdge edge;
    std::int64_t N = n_start;
    double prev = lambda1_truncated(p, N, tol * 1e-2);
    edge.window_sizes.push_back(N);
    edge.lambda1_per_N.push_back(prev);
    while (true) {
        if (N * 2 > n_cap)
            throw NoConvergence("spectral_edge: window cap " +
                                std::to_string(n_cap) + " reached");
        N *= 2;
        const double cur = lambda1_truncated(p, N, tol * 1e-2);
        edge.window_sizes.push_back(N);
        edge.lambda1_per_N.push_back(cur);
        if (cur - prev < tol) {
            edge.lambda1 = cur + (cur - prev);  // one Richardson step
            edge.extrapolation_error = std::fabs(cur - prev);
            break;
        }
        prev = cur;
    }

    // Just right of the edge the cocycle must be uniformly hyperbolic with
    // vanishing rotation number; anything else flags a bad edge estimate. The Lyapunov exponent there is
    // of order sqrt(10 tol), so the certificate length scales accordingly.
    const double e_chk = edge.lambda1 + 10.0 * tol;
    const double l_guess = std::sqrt(std::fmax(10.0 * tol, 1e-14));
    const auto n_test = static_cast<std::int64_t>(
        std::fmin(std::fmax(2.0e4, 60.0 / l_guess), 2.0e6));
    const UhReport uh = is_uniformly_hyperbolic(e_chk, p, n_test);
    edge.uh_check = uh.hyperbolic;
    const RotationEstimate rot = rotation_number(e_chk, p, 100000);
    edge.rot_check = rot.rho <= 1e-3;
    return edge;
}

IdsPoint ids(const Potential& p, double E, std::int64_t N) {
    if (N < 2) throw Error("ids requires N >= 2");
    TruncatedOperator op{&p, -N + 1, N - 1};
    IdsPoint pt;
    pt.E = E;
    pt.window_size = N;
    pt.k = static_cast<double>(sturm_count(op, E)) /
           static_cast<double>(op.dim());
    return pt;
}

}  // namespace kpplab
