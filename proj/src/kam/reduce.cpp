#include "kpplab/kam/reduce.hpp"

#include <algorithm>
#include <cmath>

#include "kpplab/cocycle.hpp"
#include "kpplab/errors.hpp"
#include "kpplab/spectrum.hpp"

namespace kpplab::kam {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string k_str(const KVec& k) {
    std::string s = "(";
    for (int i = 0; i < kMaxTorusDim; ++i)
        s += std::to_string(k[i]) + (i + 1 < kMaxTorusDim ? "," : ")");
    return s;
}

// V(theta) evaluated from the potential's Fourier data.
double potential_at(const Potential& p, const Torus& theta) {
    double v = p.mean();
    for (const auto& m : p.modes()) {
        double arg = 0.0;
        for (int i = 0; i < p.torus_dim(); ++i) arg += m.k[i] * theta[i];
        const double w = kTwoPi * arg;
        v += 2.0 * (m.coeff.real() * std::cos(w) - m.coeff.imag() * std::sin(w));
    }
    return v;
}

Mat2 schrodinger_matrix(double energy, const Potential& p, const Torus& theta) {
    return {energy + 2.0 - potential_at(p, theta), -1.0, 1.0, 0.0};
}

Torus torus_add(const Torus& a, const Torus& b, int dim) {
    Torus r{};
    for (int i = 0; i < dim; ++i) {
        r[i] = a[i] + b[i];
        r[i] -= std::floor(r[i]);
    }
    return r;
}

Torus torus_scale_add(const Torus& base, const Torus& alpha, double n, int dim) {
    Torus r{};
    for (int i = 0; i < dim; ++i) {
        r[i] = base[i] + n * alpha[i];
        r[i] -= std::floor(r[i]);
    }
    return r;
}

// Rotation number of the cocycle (alpha, A e^F) measured along one orbit by
// lifted-angle winding; near the edge the increments stay near zero so the
// branch is safe.
double rot_of_series_cocycle(const Mat2& a, const FourierMatrixSeries& f,
                             const Torus& alpha, const Torus& theta0, int dim,
                             std::int64_t iters) {
    return rotation_winding(
        [&](std::int64_t n) {
            const Torus th = torus_scale_add(theta0, alpha, static_cast<double>(n), dim);
            return a * exp_sl2(f.eval_real(th));
        },
        iters);
}

}  // namespace

TriangularForm triangular_form(const Mat2& a) {
    TriangularForm tf;
    const cplx tr(a.trace(), 0.0);
    const cplx disc = std::sqrt(tr * tr - cplx(4.0, 0.0));
    cplx mu = 0.5 * (tr + disc);
    // Prefer the eigenvalue in the upper half plane (rotation by +rho) or,
    // for real pairs, the one outside the unit circle.
    const cplx mu_alt = 0.5 * (tr - disc);
    if (mu.imag() < -1e-15 || (std::fabs(mu.imag()) <= 1e-15 &&
                               std::abs(mu) < std::abs(mu_alt)))
        mu = mu_alt;
    // Eigenvector from the adjugate of (A - mu I).
    const cplx b11 = cplx(a.a11) - mu, b12(a.a12), b21(a.a21),
               b22 = cplx(a.a22) - mu;
    cplx v1 = b22, v2 = -b21;           // first adjugate column
    const cplx w1 = -b12, w2 = b11;     // second adjugate column
    if (std::norm(w1) + std::norm(w2) > std::norm(v1) + std::norm(v2)) {
        v1 = w1;
        v2 = w2;
    }
    double nv = std::sqrt(std::norm(v1) + std::norm(v2));
    if (nv < 1e-14) {  // A is (numerically) a multiple of the identity
        v1 = cplx(1.0);
        v2 = cplx(0.0);
        nv = 1.0;
    }
    v1 /= nv;
    v2 /= nv;
    // Unitary basis [v, v_perp]; T = Q* A Q is upper triangular.
    tf.q = {v1, -std::conj(v2), v2, std::conj(v1)};
    const Mat2c qs = {std::conj(v1), std::conj(v2), -v2, v1};  // Q*
    const Mat2c t = mc_mul(qs, mc_mul(mc_from_real(a), tf.q));
    tf.mu = t[0];
    tf.p = t[1];
    tf.mu2 = t[3];
    return tf;
}

FourierMatrixSeries homological_solve(const Mat2& a,
                                      const FourierMatrixSeries& g,
                                      const Torus& alpha, double K,
                                      double divisor_floor) {
    const TriangularForm tf = triangular_form(a);
    const Mat2c qs = mc_inv(tf.q);  // unitary, so this is Q*
    FourierMatrixSeries y(g.dim(), g.strip());
    for (const auto& [k, gk] : g.coeffs()) {
        if (k_norm1(k) == 0 || k_norm1(k) >= K) continue;
        double arg = 0.0;
        for (int i = 0; i < g.dim(); ++i) arg += k[i] * alpha[i];
        const cplx e = std::polar(1.0, kTwoPi * arg);

        const Mat2c gt = mc_mul(qs, mc_mul(gk, tf.q));
        const cplx d21 = e * tf.mu * tf.mu - cplx(1.0);
        const cplx d11 = e - cplx(1.0);
        const cplx d12 = e * tf.mu2 * tf.mu2 - cplx(1.0);
        if (std::abs(d21) < divisor_floor || std::abs(d11) < divisor_floor ||
            std::abs(d12) < divisor_floor)
            throw SmallDivisor("small divisor at mode k=" + k_str(k) +
                               " (resonant case is out of scope)");

        const cplx y21 = gt[2] / d21;
        const cplx y11 = (gt[0] + e * tf.p * tf.mu * y21) / d11;
        const cplx y12 =
            (gt[1] + e * tf.p * tf.p * y21 - 2.0 * e * tf.p * tf.mu2 * y11) / d12;
        const Mat2c yt = {y11, y12, y21, -y11};
        y.coeff(k) = mc_mul(tf.q, mc_mul(yt, qs));
    }
    y.prune(0.0);
    return y;
}

KamStepResult kam_step(const Mat2& a, const FourierMatrixSeries& f,
                       const Torus& alpha, double r, double r_next,
                       const KamConfig& cfg) {
    if (r_next >= r) throw Error("kam_step: r_next must be smaller than r");
    const double eps = f.weighted_norm(r);
    const double a_norm = a.op_norm();

    KamStepResult res;
    res.report.epsilon_in = eps;
    res.report.a_before = a;

    if (eps == 0.0) {  // nothing to do
        res.y = FourierMatrixSeries(f.dim(), r_next);
        res.a_next = a;
        res.f_next = FourierMatrixSeries(f.dim(), r_next);
        res.report.a_after = a;
        return res;
    }

    const double bound =
        cfg.small_c * std::pow(r - r_next, 6.0 * (1.0 + cfg.delta) * cfg.tau) /
        std::pow(a_norm, 6.0);
    if (eps >= bound)
        throw SmallnessViolated("kam_step: |F|_r = " + std::to_string(eps) +
                                " >= " + std::to_string(bound));
    const double rot_a = rotation_of_constant(a);
    if (rot_a > 2.0 * a_norm * std::sqrt(eps))
        throw SmallnessViolated(
            "kam_step: rot(A) = " + std::to_string(rot_a) +
            " violates the non-resonance bound 2|A| eps^{1/2}");

    const double K = 2.0 * std::fabs(std::log(eps)) / (r - r_next);
    res.report.k_used = K;

    // Linearized conjugation: A^{-1} Y(.+alpha) A - Y = T_K F - hat F(0).
    const FourierMatrixSeries g = f.truncated(K).minus_mean();
    res.y = homological_solve(a, g, alpha, K, cfg.divisor_floor);
    res.y.set_strip(r_next);
    res.report.norm_y = res.y.weighted_norm(r_next);

    // Exact conjugated cocycle M = e^{-Y(.+alpha)} A e^F e^Y, then split
    // A e^{G} with A' = A e^{hat G(0)} and F' = log(e^{-hat G(0)} e^{G}).
    const FourierMatrixSeries ey = exp_series(res.y, cfg.k_cap);
    const FourierMatrixSeries eyi =
        exp_series(res.y.scaled(cplx(-1.0)), cfg.k_cap).shifted(alpha);
    const FourierMatrixSeries ef = exp_series(f, cfg.k_cap);
    const FourierMatrixSeries a_const =
        FourierMatrixSeries::constant(f.dim(), r, mc_from_real(a));
    FourierMatrixSeries m = FourierMatrixSeries::mul(
        FourierMatrixSeries::mul(FourierMatrixSeries::mul(eyi, a_const, cfg.k_cap),
                                 ef, cfg.k_cap),
        ey, cfg.k_cap);
    const FourierMatrixSeries a_inv =
        FourierMatrixSeries::constant(f.dim(), r, mc_from_real(a.inverse()));
    const FourierMatrixSeries big_g =
        log_near_identity(FourierMatrixSeries::mul(a_inv, m, cfg.k_cap), cfg.k_cap);

    const Mat2 g0 = mc_real_part(big_g.mean());
    res.a_next = a * exp_sl2(g0);
    const FourierMatrixSeries eg0_inv = FourierMatrixSeries::constant(
        f.dim(), r_next, mc_from_real(exp_sl2({-g0.a11, -g0.a12, -g0.a21, -g0.a22})));
    FourierMatrixSeries eg = exp_series(big_g, cfg.k_cap);
    res.f_next =
        log_near_identity(FourierMatrixSeries::mul(eg0_inv, eg, cfg.k_cap), cfg.k_cap);
    res.f_next.set_strip(r_next);
    res.f_next.prune(1e-21);

    res.report.epsilon_out = res.f_next.weighted_norm(r_next);
    res.report.a_after = res.a_next;
    return res;
}

ReducibilityCertificate reduce_at_edge(const Potential& p, double energy,
                                       const KamConfig& cfg) {
    ReducibilityCertificate cert;
    cert.dim = p.torus_dim();
    cert.alpha = p.alpha();

    const SpectralEdge edge = spectral_edge(p, cfg.edge_tol);
    cert.lambda1 = edge.lambda1;
    cert.energy = std::isnan(energy) ? edge.lambda1 : energy;

    // Right of the spectrum k(E) = 1, so the rotation number must vanish at
    // the edge; a nonzero value signals a wrong edge estimate (resonance).
    const RotationEstimate rot = rotation_number(cert.energy, p, cfg.rot_iters);
    if (rot.rho > 0.01)
        throw ResonanceEncountered(
            "rotation number " + std::to_string(rot.rho) +
            " does not vanish at the requested edge energy");

    // S_E^V = A e^F with A the constant part and F = [[0,0],[V_osc,0]]
    // (F nilpotent, so A e^F is exact).
    Mat2 a{cert.energy + 2.0 - p.mean(), -1.0, 1.0, 0.0};
    FourierMatrixSeries f(p.torus_dim(), cfg.r0);
    for (const auto& m : p.modes()) {
        f.coeff(m.k) = {cplx(0), cplx(0), m.coeff, cplx(0)};
        KVec neg{};
        for (int i = 0; i < kMaxTorusDim; ++i) neg[i] = -m.k[i];
        f.coeff(neg) = {cplx(0), cplx(0), std::conj(m.coeff), cplx(0)};
    }

    const Torus theta0 = p.phase();
    const double rot0 =
        rot_of_series_cocycle(a, f, cert.alpha, theta0, cert.dim, cfg.rot_iters);

    FourierMatrixSeries b =
        FourierMatrixSeries::constant(p.torus_dim(), cfg.r0, mc_id());

    // Strip schedule r_k -> r_final with r_k - r_{k+1} = (r0 - r_final)/(k+2)^2.
    const double r_final = cfg.r0 * cfg.r_final_frac;
    double r = cfg.r0;
    double eps = f.weighted_norm(r);
    int bad_steps = 0;
    for (int step = 0; step < cfg.max_steps && eps > cfg.target_eps; ++step) {
        const double r_next =
            r - (cfg.r0 - r_final) / ((step + 2.0) * (step + 2.0));
        KamStepResult sr;
        try {
            sr = kam_step(a, f, cert.alpha, r, r_next, cfg);
        } catch (const SmallnessViolated&) {
            // An energy a hair inside the band leaves the constant part
            // slightly elliptic; once eps sits below its rotation scale the
            // non-resonance condition blocks further steps. The residual is
            // already at certificate accuracy, so stop here.
            if (eps <= 1e-9) break;
            throw;
        }
        cert.steps.push_back(sr.report);

        b = FourierMatrixSeries::mul(b, exp_series(sr.y, cfg.k_cap), cfg.k_cap);
        a = sr.a_next;
        f = sr.f_next;
        r = r_next;

        const double eps_next = sr.report.epsilon_out;
        if (eps_next >= 0.5 * eps && eps_next > cfg.target_eps) {
            if (++bad_steps >= 2)
                throw DivergedIteration(
                    "KAM residual stopped contracting at eps = " +
                    std::to_string(eps_next));
        } else {
            bad_steps = 0;
        }
        eps = eps_next;

        const double rot_k =
            rot_of_series_cocycle(a, f, cert.alpha, theta0, cert.dim, cfg.rot_iters);
        cert.rot_drift_max = std::fmax(cert.rot_drift_max, std::fabs(rot_k - rot0));
    }
    if (eps > std::sqrt(cfg.target_eps))
        throw DivergedIteration("KAM iteration ended with eps = " +
                                std::to_string(eps));

    cert.a_tilde = a;
    cert.b = b;

    // Direct residual of the composed conjugacy on a phase grid.
    double worst = 0.0, dist = 0.0, imag = 0.0;
    for (int j = 0; j < cfg.residual_grid; ++j) {
        Torus th{};
        for (int i = 0; i < cert.dim; ++i) {
            th[i] = std::fmod((j + 0.5) * (i == 0 ? 1.0 : 0.61803398875) /
                                  cfg.residual_grid,
                              1.0);
        }
        const Mat2c bc = b.eval(th);
        imag = std::fmax(imag, mc_imag_max(bc));
        const Mat2 bth = mc_real_part(bc);
        const Mat2 bsh = mc_real_part(b.eval(torus_add(th, cert.alpha, cert.dim)));
        const Mat2 s = schrodinger_matrix(cert.energy, p, th);
        const Mat2 conj = bsh.inverse() * s * bth;
        worst = std::fmax(worst, frob_dist(conj, cert.a_tilde));
        dist = std::fmax(dist, frob_dist(bth, Mat2::identity()));
    }
    cert.residual = worst;
    cert.distance_to_identity = dist;
    if (imag > 1e-10)
        throw Error("conjugacy lost reality: imaginary part " +
                    std::to_string(imag));

    const double tr_gap = std::fabs(std::fabs(cert.a_tilde.trace()) - 2.0);
    if (tr_gap <= cfg.parabolic_tol) {
        cert.parabolic = true;
    } else if (tr_gap <= cfg.inconclusive_tol) {
        cert.inconclusive = true;
    } else if (std::fabs(cert.a_tilde.trace()) > 2.0) {
        throw HyperbolicLimit(
            "limit cocycle is hyperbolic (|trace| - 2 = " +
            std::to_string(tr_gap) +
            "); the spectral edge cannot be uniformly hyperbolic, so the "
            "lambda1 estimate is off");
    }
    return cert;
}

PositiveSolution positive_solution_from_conjugacy(
    const ReducibilityCertificate& cert, const Potential& p, double energy,
    std::int64_t window) {
    if (!cert.parabolic)
        throw NotParabolic("certificate is not parabolic (trace " +
                           std::to_string(cert.a_tilde.trace()) + ")");
    if (cert.distance_to_identity > 0.01)
        throw ConjugacyTooFar("|B - id| = " +
                              std::to_string(cert.distance_to_identity) +
                              " > 1/100");
    if (cert.a_tilde.trace() < 0.0)
        throw NotParabolic("negative-trace parabolic form not expected at the "
                           "top edge");

    // Parabolic normal form R_eta [[1,p],[0,1]] R_{-eta} = A~: the rotation
    // angle comes from the fixed direction of A~.
    PositiveSolution sol;
    const Mat2 m = cert.a_tilde - Mat2::identity();
    double eta = 0.0, pent = 0.0;
    const double mnorm = m.frob_norm();
    if (mnorm > 1e-13) {
        // Null vector of (A~ - I) from the larger adjugate column.
        Vec2 v{m.a22, -m.a21};
        const Vec2 w{-m.a12, m.a11};
        if (w.norm() > v.norm()) v = w;
        eta = std::atan2(v.y, v.x);
        const Mat2 t = Mat2::rotation(-eta) * cert.a_tilde * Mat2::rotation(eta);
        pent = t.a12;
        if (std::fabs(t.a21) > 1e-6 * (1.0 + std::fabs(pent)))
            throw NotParabolic("normal form keeps a lower-triangular residue " +
                               std::to_string(t.a21));
    }
    sol.eta = eta;
    sol.p_entry = pent;

    // C = B R_eta brings the cocycle to the unipotent form. Its columns are
    // tied by C21(theta + alpha) = C11(theta), so u(n) = s C11(n alpha +
    // theta) in both cases; the case analysis only decides which entry
    // certifies the sign s (cos eta when cos^2 > 1/2, else sin eta).
    const double ce = std::cos(eta), se = std::sin(eta);
    const double sign = (ce * ce > 0.5) ? (ce > 0.0 ? 1.0 : -1.0)
                                        : (se > 0.0 ? 1.0 : -1.0);

    sol.a = -window;
    sol.u.resize(static_cast<std::size_t>(2 * window + 1));
    double inf_u = 1e300;
    for (std::int64_t n = -window; n <= window; ++n) {
        Torus th{};
        for (int i = 0; i < cert.dim; ++i) {
            th[i] = p.phase()[i] + static_cast<double>(n) * cert.alpha[i];
            th[i] -= std::floor(th[i]);
        }
        const Mat2 bth = mc_real_part(cert.b.eval(th));
        const Mat2 c = bth * Mat2::rotation(eta);
        const double val = sign * c.a11;
        sol.u[static_cast<std::size_t>(n + window)] = val;
        inf_u = std::fmin(inf_u, val);
    }
    sol.inf_u = inf_u;

    double rmax = 0.0;
    for (std::int64_t n = -window + 1; n <= window - 1; ++n) {
        const auto at = [&](std::int64_t j) {
            return sol.u[static_cast<std::size_t>(j + window)];
        };
        const double res = at(n + 1) + at(n - 1) - 2.0 * at(n) +
                           p.eval(n) * at(n) - energy * at(n);
        rmax = std::fmax(rmax, std::fabs(res));
    }
    sol.residual_max = rmax;
    return sol;
}

}  // namespace kpplab::kam
