#include "kpplab/kam/series.hpp"

#include <cmath>

#include "kpplab/errors.hpp"

namespace kpplab::kam {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

KVec k_add(const KVec& a, const KVec& b) {
    KVec r{};
    for (int i = 0; i < kMaxTorusDim; ++i) r[i] = a[i] + b[i];
    return r;
}
}  // namespace

int k_norm1(const KVec& k) {
    int s = 0;
    for (int v : k) s += std::abs(v);
    return s;
}

Mat2c mc_id() { return {cplx(1), cplx(0), cplx(0), cplx(1)}; }
Mat2c mc_zero() { return {cplx(0), cplx(0), cplx(0), cplx(0)}; }

Mat2c mc_from_real(const Mat2& m) {
    return {cplx(m.a11), cplx(m.a12), cplx(m.a21), cplx(m.a22)};
}

Mat2 mc_real_part(const Mat2c& m) {
    return {m[0].real(), m[1].real(), m[2].real(), m[3].real()};
}

double mc_imag_max(const Mat2c& m) {
    double v = 0.0;
    for (const auto& z : m) v = std::fmax(v, std::fabs(z.imag()));
    return v;
}

Mat2c mc_mul(const Mat2c& a, const Mat2c& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2c mc_add(const Mat2c& a, const Mat2c& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Mat2c mc_sub(const Mat2c& a, const Mat2c& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Mat2c mc_scale(const cplx& s, const Mat2c& a) {
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

Mat2c mc_conj(const Mat2c& a) {
    return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2]), std::conj(a[3])};
}

Mat2c mc_inv(const Mat2c& a) {
    const cplx d = mc_det(a);
    return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
}

cplx mc_trace(const Mat2c& a) { return a[0] + a[3]; }
cplx mc_det(const Mat2c& a) { return a[0] * a[3] - a[1] * a[2]; }

double mc_norm(const Mat2c& a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
}

Mat2 exp_sl2(const Mat2& m) {
    // m traceless: m^2 = -det(m) I, so e^m = ch(s) I + (sh(s)/s) m with
    // s^2 = -det(m).
    const double s2 = -m.det();
    double ch, shs;  // cosh(s), sinh(s)/s
    if (s2 > 1e-12) {
        const double s = std::sqrt(s2);
        ch = std::cosh(s);
        shs = std::sinh(s) / s;
    } else if (s2 < -1e-12) {
        const double w = std::sqrt(-s2);
        ch = std::cos(w);
        shs = std::sin(w) / w;
    } else {
        ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
        shs = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
    }
    return {ch + shs * m.a11, shs * m.a12, shs * m.a21, ch + shs * m.a22};
}

FourierMatrixSeries FourierMatrixSeries::constant(int dim, double strip_r,
                                                  const Mat2c& m) {
    FourierMatrixSeries f(dim, strip_r);
    f.coeffs_[KVec{}] = m;
    return f;
}

Mat2c FourierMatrixSeries::mean() const {
    const auto it = coeffs_.find(KVec{});
    return (it == coeffs_.end()) ? mc_zero() : it->second;
}

void FourierMatrixSeries::prune(double floor) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (mc_norm(it->second) <= floor)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

double FourierMatrixSeries::weighted_norm(double r) const {
    double s = 0.0;
    for (const auto& [k, m] : coeffs_)
        s += std::exp(r * k_norm1(k)) * mc_norm(m);
    return s;
}

FourierMatrixSeries FourierMatrixSeries::truncated(double K) const {
    FourierMatrixSeries f(dim_, strip_r_);
    for (const auto& [k, m] : coeffs_)
        if (k_norm1(k) < K) f.coeffs_[k] = m;
    return f;
}

FourierMatrixSeries FourierMatrixSeries::tail(double K) const {
    FourierMatrixSeries f(dim_, strip_r_);
    for (const auto& [k, m] : coeffs_)
        if (k_norm1(k) >= K) f.coeffs_[k] = m;
    return f;
}

FourierMatrixSeries FourierMatrixSeries::minus_mean() const {
    FourierMatrixSeries f = *this;
    f.coeffs_.erase(KVec{});
    return f;
}

FourierMatrixSeries FourierMatrixSeries::shifted(const Torus& alpha) const {
    FourierMatrixSeries f(dim_, strip_r_);
    for (const auto& [k, m] : coeffs_) {
        double arg = 0.0;
        for (int i = 0; i < dim_; ++i) arg += k[i] * alpha[i];
        f.coeffs_[k] = mc_scale(std::polar(1.0, kTwoPi * arg), m);
    }
    return f;
}

Mat2c FourierMatrixSeries::eval(const Torus& theta) const {
    Mat2c out = mc_zero();
    for (const auto& [k, m] : coeffs_) {
        double arg = 0.0;
        for (int i = 0; i < dim_; ++i) arg += k[i] * theta[i];
        out = mc_add(out, mc_scale(std::polar(1.0, kTwoPi * arg), m));
    }
    return out;
}

double FourierMatrixSeries::reality_defect(int samples) const {
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        Torus th{};
        for (int i = 0; i < dim_; ++i)
            th[i] = std::fmod(0.37 + static_cast<double>(j) * (0.61803398875 + i * 0.1),
                              1.0);
        worst = std::fmax(worst, mc_imag_max(eval(th)));
    }
    return worst;
}

FourierMatrixSeries operator+(const FourierMatrixSeries& a,
                              const FourierMatrixSeries& b) {
    FourierMatrixSeries f = a;
    for (const auto& [k, m] : b.coeffs_) {
        auto it = f.coeffs_.find(k);
        if (it == f.coeffs_.end())
            f.coeffs_[k] = m;
        else
            it->second = mc_add(it->second, m);
    }
    return f;
}

FourierMatrixSeries operator-(const FourierMatrixSeries& a,
                              const FourierMatrixSeries& b) {
    return a + b.scaled(cplx(-1.0));
}

FourierMatrixSeries FourierMatrixSeries::scaled(const cplx& s) const {
    FourierMatrixSeries f(dim_, strip_r_);
    for (const auto& [k, m] : coeffs_) f.coeffs_[k] = mc_scale(s, m);
    return f;
}

FourierMatrixSeries FourierMatrixSeries::mul(const FourierMatrixSeries& a,
                                             const FourierMatrixSeries& b,
                                             int k_cap) {
    FourierMatrixSeries f(a.dim_, std::fmin(a.strip_r_, b.strip_r_));
    for (const auto& [ka, ma] : a.coeffs_) {
        for (const auto& [kb, mb] : b.coeffs_) {
            const KVec k = k_add(ka, kb);
            if (k_norm1(k) > k_cap) continue;
            auto it = f.coeffs_.find(k);
            const Mat2c prod = mc_mul(ma, mb);
            if (it == f.coeffs_.end())
                f.coeffs_[k] = prod;
            else
                it->second = mc_add(it->second, prod);
        }
    }
    f.prune();
    return f;
}

FourierMatrixSeries exp_series(const FourierMatrixSeries& x, int k_cap) {
    FourierMatrixSeries sum =
        FourierMatrixSeries::constant(x.dim(), x.strip(), mc_id());
    FourierMatrixSeries term = sum;
    for (int j = 1; j <= 64; ++j) {
        term = FourierMatrixSeries::mul(term, x, k_cap)
                   .scaled(cplx(1.0 / static_cast<double>(j)));
        sum = sum + term;
        if (term.weighted_norm(0.0) < 1e-20) break;
    }
    sum.prune();
    return sum;
}

FourierMatrixSeries log_near_identity(const FourierMatrixSeries& m, int k_cap) {
    FourierMatrixSeries w = m;
    w.coeff(KVec{}) = mc_sub(m.mean(), mc_id());
    w.prune();
    const double w0 = w.weighted_norm(0.0);
    if (w0 > 0.9)
        throw Error("log_near_identity: argument too far from the identity (" +
                    std::to_string(w0) + ")");
    FourierMatrixSeries sum = w;
    FourierMatrixSeries pow = w;
    double sign = -1.0;
    for (int j = 2; j <= 96; ++j) {
        pow = FourierMatrixSeries::mul(pow, w, k_cap);
        sum = sum + pow.scaled(cplx(sign / static_cast<double>(j)));
        sign = -sign;
        if (pow.weighted_norm(0.0) / j < 1e-20) break;
    }
    sum.prune();
    return sum;
}

}  // namespace kpplab::kam
