#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace kpplab {

enum class PotentialKind { Constant, Periodic, Quasiperiodic };

inline constexpr int kMaxTorusDim = 3;

// Integer frequency vector in Z^d (unused coordinates zero) and a point on
// the torus T^d = (R/Z)^d.
using KVec = std::array<int, kMaxTorusDim>;
using Torus = std::array<double, kMaxTorusDim>;

struct QpMode {
    KVec k{};
    std::complex<double> coeff;
};

// Almost-periodic coefficient sequence c(n) with inf_Z c > 0: constant,
// periodic, or quasi-periodic with a finite Fourier series V on T^d,
// c(n) = V(n*alpha + phase). Immutable after construction; hull translates
// are new values.
class Potential {
  public:
    static Potential constant(double c0);
    static Potential periodic(std::vector<double> values);

    // `modes` may list k, -k or both; coefficients are folded so that the
    // evaluated sequence is real. Throws NonPositiveInfimum when the analytic
    // lower bound mean - 2*sum|coeff| is not positive.
    static Potential quasiperiodic(int dim, double mean,
                                   std::vector<QpMode> modes, Torus alpha,
                                   Torus phase = {});

    // c(n) = 2*kappa*cos(2*pi*(n*alpha + phase)) + C
    static Potential amo(double kappa, double C, double alpha,
                         double phase = 0.0);

    PotentialKind kind() const { return kind_; }
    int torus_dim() const { return dim_; }

    // 0 for aperiodic (quasi-periodic) media.
    std::int64_t period() const;

    double eval(std::int64_t n) const;
    void fill(std::int64_t first, std::span<double> out) const;

    // Hull translate g.k = g(.+k); quasi-periodic media advance the phase by
    // k*alpha mod 1.
    Potential shift(std::int64_t k) const;

    double inf_bound() const { return inf_bound_; }
    double sup_bound() const { return sup_bound_; }
    double mean() const { return mean_; }

    const Torus& alpha() const { return alpha_; }
    const Torus& phase() const { return phase_; }
    const std::vector<QpMode>& modes() const { return modes_; }
    const std::vector<double>& values() const { return values_; }

    Potential with_phase(const Torus& phase) const;

    // Equispaced hull translates used for phase averaging: the potential
    // itself (constant), cyclic shifts (periodic), or low-discrepancy phase
    // offsets (quasi-periodic).
    std::vector<Potential> hull_samples(int m) const;

  private:
    Potential() = default;

    PotentialKind kind_ = PotentialKind::Constant;
    int dim_ = 1;
    double mean_ = 0.0;
    std::vector<double> values_;
    std::vector<QpMode> modes_;  // canonical half-lattice representatives
    Torus alpha_{};
    Torus phase_{};
    double inf_bound_ = 0.0;
    double sup_bound_ = 0.0;
};

}  // namespace kpplab
