#include "kpplab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "kpplab/errors.hpp"

namespace kpplab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac(double x) {
    const double f = x - std::floor(x);
    return (f >= 1.0) ? 0.0 : f;
}

bool is_canonical(const KVec& k) {
    for (int i = 0; i < kMaxTorusDim; ++i) {
        if (k[i] > 0) return true;
        if (k[i] < 0) return false;
    }
    return false;  // zero vector handled separately
}

KVec negate(const KVec& k) {
    KVec r{};
    for (int i = 0; i < kMaxTorusDim; ++i) r[i] = -k[i];
    return r;
}

bool is_zero(const KVec& k) {
    return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

// Radical-inverse (Halton) sequence for low-discrepancy phase offsets in
// dimension > 1; dimension 1 uses exact equispacing.
double radical_inverse(int base, int i) {
    double inv = 1.0 / base, r = 0.0, f = inv;
    while (i > 0) {
        r += f * (i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace

Potential Potential::constant(double c0) {
    if (c0 <= 0.0)
        throw NonPositiveInfimum("constant potential requires c0 > 0, got " +
                                 std::to_string(c0));
    Potential p;
    p.kind_ = PotentialKind::Constant;
    p.mean_ = c0;
    p.inf_bound_ = c0;
    p.sup_bound_ = c0;
    return p;
}

Potential Potential::periodic(std::vector<double> values) {
    if (values.empty()) throw EmptyPeriod("periodic potential with empty value list");
    const double lo = *std::min_element(values.begin(), values.end());
    if (lo <= 0.0)
        throw NonPositiveInfimum("periodic potential has min value " +
                                 std::to_string(lo));
    Potential p;
    p.kind_ = PotentialKind::Periodic;
    p.inf_bound_ = lo;
    p.sup_bound_ = *std::max_element(values.begin(), values.end());
    p.mean_ = std::accumulate(values.begin(), values.end(), 0.0) /
              static_cast<double>(values.size());
    p.values_ = std::move(values);
    return p;
}

Potential Potential::quasiperiodic(int dim, double mean,
                                   std::vector<QpMode> modes, Torus alpha,
                                   Torus phase) {
    if (dim < 1 || dim > kMaxTorusDim)
        throw ConfigError("torus dimension must be in [1, " +
                          std::to_string(kMaxTorusDim) + "]");
    // Fold arbitrary mode lists onto canonical representatives; the -k
    // coefficient is the conjugate, which keeps c(n) real.
    std::map<KVec, std::complex<double>> folded;
    for (const auto& m : modes) {
        if (is_zero(m.k)) {
            mean += m.coeff.real();
            continue;
        }
        if (is_canonical(m.k))
            folded[m.k] += m.coeff;
        else
            folded[negate(m.k)] += std::conj(m.coeff);
    }
    Potential p;
    p.kind_ = PotentialKind::Quasiperiodic;
    p.dim_ = dim;
    p.mean_ = mean;
    for (int i = 0; i < kMaxTorusDim; ++i) {
        p.alpha_[i] = (i < dim) ? frac(alpha[i]) : 0.0;
        p.phase_[i] = (i < dim) ? frac(phase[i]) : 0.0;
    }
    double osc = 0.0;
    for (auto& [k, c] : folded) {
        if (std::abs(c) == 0.0) continue;
        p.modes_.push_back({k, c});
        osc += 2.0 * std::abs(c);
    }
    p.inf_bound_ = mean - osc;
    p.sup_bound_ = mean + osc;
    if (p.inf_bound_ <= 0.0)
        throw NonPositiveInfimum("quasiperiodic analytic lower bound " +
                                 std::to_string(p.inf_bound_) + " <= 0");
    return p;
}

Potential Potential::amo(double kappa, double C, double alpha, double phase) {
    KVec k{};
    k[0] = 1;
    return quasiperiodic(1, C, {{k, std::complex<double>(kappa, 0.0)}},
                         {alpha, 0.0, 0.0}, {phase, 0.0, 0.0});
}

std::int64_t Potential::period() const {
    switch (kind_) {
        case PotentialKind::Constant: return 1;
        case PotentialKind::Periodic: return static_cast<std::int64_t>(values_.size());
        case PotentialKind::Quasiperiodic: return 0;
    }
    return 0;
}

double Potential::eval(std::int64_t n) const {
    switch (kind_) {
        case PotentialKind::Constant:
            return mean_;
        case PotentialKind::Periodic: {
            const auto p = static_cast<std::int64_t>(values_.size());
            std::int64_t i = n % p;
            if (i < 0) i += p;
            return values_[static_cast<std::size_t>(i)];
        }
        case PotentialKind::Quasiperiodic: {
            double v = mean_;
            for (const auto& m : modes_) {
                double arg = 0.0;
                for (int i = 0; i < dim_; ++i)
                    arg += m.k[i] * (static_cast<double>(n) * alpha_[i] + phase_[i]);
                const double w = kTwoPi * arg;
                v += 2.0 * (m.coeff.real() * std::cos(w) - m.coeff.imag() * std::sin(w));
            }
            return v;
        }
    }
    return mean_;
}

void Potential::fill(std::int64_t first, std::span<double> out) const {
    if (kind_ != PotentialKind::Quasiperiodic) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = eval(first + static_cast<std::int64_t>(i));
        return;
    }
    // Per-mode Chebyshev recurrence cos((j+1)w) = 2 cos(w) cos(jw) - cos((j-1)w),
    // seeded exactly at the start of the span; drift stays near machine level
    // for the block lengths the integrators use.
    std::fill(out.begin(), out.end(), mean_);
    for (const auto& m : modes_) {
        double warg = 0.0, poff = 0.0;
        for (int i = 0; i < dim_; ++i) {
            warg += m.k[i] * alpha_[i];
            poff += m.k[i] * phase_[i];
        }
        const double w = kTwoPi * warg;
        const double base = kTwoPi * (static_cast<double>(first) * warg + poff);
        const double a = 2.0 * m.coeff.real(), b = -2.0 * m.coeff.imag();
        double c_prev = std::cos(base - w), s_prev = std::sin(base - w);
        double c_cur = std::cos(base), s_cur = std::sin(base);
        const double two_cos_w = 2.0 * std::cos(w);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += a * c_cur + b * s_cur;
            const double c_next = two_cos_w * c_cur - c_prev;
            const double s_next = two_cos_w * s_cur - s_prev;
            c_prev = c_cur;
            s_prev = s_cur;
            c_cur = c_next;
            s_cur = s_next;
        }
    }
}

Potential Potential::shift(std::int64_t k) const {
    Potential p = *this;
    switch (kind_) {
        case PotentialKind::Constant:
            break;
        case PotentialKind::Periodic: {
            const auto n = static_cast<std::int64_t>(values_.size());
            std::int64_t off = k % n;
            if (off < 0) off += n;
            std::rotate(p.values_.begin(), p.values_.begin() + off, p.values_.end());
            break;
        }
        case PotentialKind::Quasiperiodic:
            for (int i = 0; i < dim_; ++i)
                p.phase_[i] = frac(phase_[i] + static_cast<double>(k) * alpha_[i]);
            break;
    }
    return p;
}

Potential Potential::with_phase(const Torus& phase) const {
    Potential p = *this;
    if (kind_ == PotentialKind::Quasiperiodic)
        for (int i = 0; i < dim_; ++i) p.phase_[i] = frac(phase[i]);
    return p;
}

std::vector<Potential> Potential::hull_samples(int m) const {
    std::vector<Potential> out;
    switch (kind_) {
        case PotentialKind::Constant:
            out.push_back(*this);
            break;
        case PotentialKind::Periodic: {
            const auto p = static_cast<std::int64_t>(values_.size());
            const auto count = std::min<std::int64_t>(m, p);
            for (std::int64_t k = 0; k < count; ++k) out.push_back(shift(k));
            break;
        }
        case PotentialKind::Quasiperiodic: {
            static const int bases[kMaxTorusDim] = {2, 3, 5};
            for (int j = 0; j < m; ++j) {
                Torus th = phase_;
                if (dim_ == 1) {
                    th[0] = frac(phase_[0] + static_cast<double>(j) / m);
                } else {
                    for (int i = 0; i < dim_; ++i)
                        th[i] = frac(phase_[i] + radical_inverse(bases[i], j + 1));
                }
                out.push_back(with_phase(th));
            }
            break;
        }
    }
    return out;
}

}  // namespace kpplab
