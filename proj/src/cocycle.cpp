#include "kpplab/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kpplab/errors.hpp"

namespace kpplab {

namespace {

constexpr int kRenormEvery = 16;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Right singular vector for the smallest singular value of a 2x2 matrix,
// i.e. the most-contracted direction.
Vec2 contracted_direction(const Mat2& m) {
    // Eigenvector of m^T m for the smaller eigenvalue.
    const double a = m.a11 * m.a11 + m.a21 * m.a21;
    const double b = m.a11 * m.a12 + m.a21 * m.a22;
    const double c = m.a12 * m.a12 + m.a22 * m.a22;
    const double tr = a + c;
    const double disc = std::sqrt(std::fmax((a - c) * (a - c) + 4.0 * b * b, 0.0));
    const double lam = 0.5 * (tr - disc);
    // (a - lam) x + b y = 0 or b x + (c - lam) y = 0; pick the better row.
    Vec2 v;
    if (std::fabs(a - lam) > std::fabs(c - lam)) {
        v = {-b, a - lam};
    } else {
        v = {c - lam, -b};
    }
    const double n = v.norm();
    if (n == 0.0) return {1.0, 0.0};
    return {v.x / n, v.y / n};
}

double sin_angle(const Vec2& u, const Vec2& v) {
    return std::fabs(u.x * v.y - u.y * v.x);
}

}  // namespace

Mat2 transfer_matrix(double E, const Potential& p, std::int64_t n) {
    return {E + 2.0 - p.eval(n), -1.0, 1.0, 0.0};
}

CocycleOrbit cocycle_product(double E, const Potential& p, std::int64_t n) {
    if (n < 0) {
        // A_{-n}(g) = A_n(g.(-n))^{-1}; the exact product has det 1, so its
        // inverse is the adjugate of the scaled factor at the same scale.
        CocycleOrbit fwd = cocycle_product(E, p.shift(n), -n);
        CocycleOrbit out;
        out.E = E;
        out.length = n;
        out.log_scale = fwd.log_scale;
        out.matrix = fwd.matrix.adjugate();
        return out;
    }
    CocycleOrbit out;
    out.E = E;
    out.length = n;
    for (std::int64_t i = 0; i < n; ++i) {
        out.matrix = transfer_matrix(E, p, i) * out.matrix;
        if ((i + 1) % kRenormEvery == 0) {
            const double s = out.matrix.frob_norm();
            out.log_scale += std::log(s);
            out.matrix = (1.0 / s) * out.matrix;
        }
    }
    return out;
}

LyapunovEstimate lyapunov(double E, const Potential& p, std::int64_t n_iters,
                          int n_phases, simd::Mode mode) {
    n_iters = std::max<std::int64_t>(n_iters, 2);
    if (n_iters % 2 != 0) ++n_iters;

    const auto& kt = simd::kernels(mode);
    std::vector<Potential> phases = p.hull_samples(std::max(n_phases, 1));
    const int lanes = static_cast<int>(phases.size());

    std::vector<double> p11(lanes, 1.0), p12(lanes, 0.0), p21(lanes, 0.0),
        p22(lanes, 1.0), log_scale(lanes, 0.0);
    std::vector<double> half_lognorm(lanes, 0.0);

    constexpr std::int64_t kBlock = 512;  // multiple of the renorm cadence
    std::vector<double> dbuf(static_cast<std::size_t>(kBlock) * lanes);
    std::vector<double> cbuf(kBlock);

    const std::int64_t half = n_iters / 2;
    std::int64_t done = 0;
    while (done < n_iters) {
        std::int64_t len = std::min(kBlock, n_iters - done);
        if (done < half && done + len > half) len = half - done;
        for (int l = 0; l < lanes; ++l) {
            phases[static_cast<std::size_t>(l)].fill(done, {cbuf.data(), static_cast<std::size_t>(len)});
            for (std::int64_t s = 0; s < len; ++s)
                dbuf[static_cast<std::size_t>(s * lanes + l)] = E + 2.0 - cbuf[static_cast<std::size_t>(s)];
        }
        kt.cocycle_steps(p11.data(), p12.data(), p21.data(), p22.data(),
                         log_scale.data(), dbuf.data(), lanes, len, kRenormEvery);
        done += len;
        if (done == half) {
            for (int l = 0; l < lanes; ++l) {
                const Mat2 m{p11[l], p12[l], p21[l], p22[l]};
                half_lognorm[l] = log_scale[l] + std::log(m.op_norm());
            }
        }
    }

    std::vector<double> per_phase(lanes);
    for (int l = 0; l < lanes; ++l) {
        const Mat2 m{p11[l], p12[l], p21[l], p22[l]};
        const double full_lognorm = log_scale[l] + std::log(m.op_norm());
        per_phase[l] = (full_lognorm - half_lognorm[l]) / static_cast<double>(n_iters - half);
    }

    LyapunovEstimate est;
    est.E = E;
    est.n_iters = n_iters;
    est.phases_averaged = lanes;
    double sum = 0.0;
    for (double v : per_phase) sum += v;
    est.value = sum / lanes;
    if (lanes >= 2) {
        double ss = 0.0;
        for (double v : per_phase) ss += (v - est.value) * (v - est.value);
        est.std_error = std::sqrt(ss / (lanes - 1)) / std::sqrt(static_cast<double>(lanes));
    } else {
        est.std_error = std::fabs(est.value) * 1e-6 + 1e-12;  // single orbit, no spread
    }
    // Eq. (LE) gives L >= 0; clamp float noise only.
    if (est.value < 0.0 && est.value > -1e-9) est.value = 0.0;
    return est;
}

RotationEstimate rotation_number(double E, const Potential& p,
                                 std::int64_t n_iters) {
    n_iters = std::max<std::int64_t>(n_iters, 1);
    // Generic initial direction; u holds the solution value u(n).
    double u = 0.7648421872844885;  // cos(0.7)
    double v = 0.644217687237691;   // sin(0.7)
    std::int64_t crossings = 0;
    for (std::int64_t i = 0; i < n_iters; ++i) {
        const double d = E + 2.0 - p.eval(i);
        const double un = d * u - v;
        if ((un < 0.0 && u > 0.0) || (un > 0.0 && u < 0.0)) ++crossings;
        v = u;
        u = un;
        if ((i + 1) % kRenormEvery == 0) {
            const double s = std::hypot(u, v);
            u /= s;
            v /= s;
        }
        if (u == 0.0) u = 1e-300;  // keep a sign for the crossing count
    }
    RotationEstimate r;
    r.E = E;
    r.iters = n_iters;
    // Each sign change is a transversal pass through the vertical direction,
    // half a projective turn: rho = crossings / (2n).
    r.rho = static_cast<double>(crossings) / (2.0 * static_cast<double>(n_iters));
    return r;
}

double rotation_winding(const std::function<Mat2(std::int64_t)>& step,
                        std::int64_t n) {
    Vec2 v{0.7648421872844885, 0.644217687237691};
    double angle = std::atan2(v.y, v.x);
    double total = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const Vec2 w = step(i) * v;
        const double a = std::atan2(w.y, w.x);
        double d = a - angle;
        while (d > 3.141592653589793) d -= kTwoPi;
        while (d <= -3.141592653589793) d += kTwoPi;
        total += d;
        angle = a;
        const double nn = w.norm();
        v = {w.x / nn, w.y / nn};
    }
    double rho = std::fabs(total) / (kTwoPi * static_cast<double>(n));
    rho -= std::floor(rho);
    return std::min(rho, 1.0 - rho);
}

double rotation_of_constant(const Mat2& A) {
    const double t = A.trace();
    if (t >= 2.0) return 0.0;
    if (t <= -2.0) return 0.5;
    return std::acos(0.5 * t) / kTwoPi;
}

UhReport is_uniformly_hyperbolic(double E, const Potential& p,
                                 std::int64_t n_test) {
    n_test = std::max<std::int64_t>(n_test, 64);
    const int n_phases = static_cast<int>(std::min<std::int64_t>(n_test, 16));
    auto phases = p.hull_samples(n_phases);

    UhReport rep;
    rep.min_angle = 1e300;
    bool converged_all = true;
    double growth_sum = 0.0;

    constexpr double kAngleFloor = 1e-6;
    constexpr double kTotalGrowthFloor = 20.0;  // require |A_n| >= e^20

    for (const auto& g : phases) {
        // Checkpoints of the most-contracted direction of A_m along the
        // second half of the orbit; under UH they converge geometrically.
        std::vector<Vec2> dirs;
        CocycleOrbit orb;
        orb.E = E;
        std::int64_t next_cp = n_test / 2;
        for (std::int64_t i = 0; i < n_test; ++i) {
            orb.matrix = transfer_matrix(E, g, i) * orb.matrix;
            if ((i + 1) % kRenormEvery == 0) {
                const double s = orb.matrix.frob_norm();
                orb.log_scale += std::log(s);
                orb.matrix = (1.0 / s) * orb.matrix;
            }
            if (i + 1 == next_cp) {
                dirs.push_back(contracted_direction(orb.matrix));
                next_cp += n_test / 8;
            }
        }
        const double total_growth = orb.log_scale + std::log(orb.matrix.op_norm());
        growth_sum += total_growth / static_cast<double>(n_test);

        double prev = 1e300;
        bool conv = true;
        for (std::size_t j = 1; j < dirs.size(); ++j) {
            const double d = sin_angle(dirs[j - 1], dirs[j]);
            if (d > 1.2 * prev + 1e-14) conv = false;
            prev = d;
        }
        if (prev > 1e-6) conv = false;
        converged_all = converged_all && conv;

        // Unstable direction at g: image of the most-expanded direction of
        // the backward product, via A_{-n}(g) = A_n(g.(-n))^{-1}.
        CocycleOrbit back = cocycle_product(E, g.shift(-n_test), n_test);
        const Vec2 s_dir = dirs.empty() ? Vec2{1.0, 0.0} : dirs.back();
        const Vec2 cb = contracted_direction(back.matrix);
        // Most-expanded right-singular direction is orthogonal to cb; its
        // image under the product spans E_u(g).
        Vec2 eb{-cb.y, cb.x};
        Vec2 u_dir = back.matrix * eb;
        const double un = u_dir.norm();
        if (un > 0.0) u_dir = {u_dir.x / un, u_dir.y / un};
        rep.min_angle = std::min(rep.min_angle, sin_angle(s_dir, u_dir));
    }

    rep.growth = growth_sum / static_cast<double>(phases.size());
    const bool grows = rep.growth * static_cast<double>(n_test) >= kTotalGrowthFloor;
    if (!grows) {
        rep.hyperbolic = false;
        rep.inconclusive = false;
        return rep;
    }
    if (converged_all && rep.min_angle >= kAngleFloor) {
        rep.hyperbolic = true;
    } else {
        rep.hyperbolic = false;
        rep.inconclusive = true;  // growth seen, splitting not certified
    }
    return rep;
}

}  // namespace kpplab
