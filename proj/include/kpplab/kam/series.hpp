#pragma once

#include <array>
#include <complex>
#include <map>

#include "kpplab/mat2.hpp"
#include "kpplab/potentials.hpp"

namespace kpplab::kam {

using cplx = std::complex<double>;

// Row-major 2x2 complex matrix {a11, a12, a21, a22}.
using Mat2c = std::array<cplx, 4>;

Mat2c mc_id();
Mat2c mc_zero();
Mat2c mc_from_real(const Mat2& m);
Mat2 mc_real_part(const Mat2c& m);
double mc_imag_max(const Mat2c& m);
Mat2c mc_mul(const Mat2c& a, const Mat2c& b);
Mat2c mc_add(const Mat2c& a, const Mat2c& b);
Mat2c mc_sub(const Mat2c& a, const Mat2c& b);
Mat2c mc_scale(const cplx& s, const Mat2c& a);
Mat2c mc_conj(const Mat2c& a);
Mat2c mc_inv(const Mat2c& a);
cplx mc_trace(const Mat2c& a);
cplx mc_det(const Mat2c& a);
double mc_norm(const Mat2c& a);  // Frobenius

// Matrix exponential of a real traceless 2x2 (M^2 = -det(M) I).
Mat2 exp_sl2(const Mat2& m);

// Truncated matrix-valued Fourier series on T^d:
// F(theta) = sum_k coeff(k) e^{2 pi i <k, theta>}. Real-valued series keep
// coeff(-k) = conj(coeff(k)); every operation here preserves that symmetry.
class FourierMatrixSeries {
  public:
    FourierMatrixSeries() = default;
    FourierMatrixSeries(int dim, double strip_r) : dim_(dim), strip_r_(strip_r) {}

    static FourierMatrixSeries constant(int dim, double strip_r, const Mat2c& m);

    int dim() const { return dim_; }
    double strip() const { return strip_r_; }
    void set_strip(double r) { strip_r_ = r; }

    const std::map<KVec, Mat2c>& coeffs() const { return coeffs_; }
    Mat2c& coeff(const KVec& k) { return coeffs_[k]; }
    Mat2c mean() const;
    bool empty() const { return coeffs_.empty(); }

    void prune(double floor = 1e-20);

    // |F|_r = sum_k e^{r |k|_1} |coeff(k)|.
    double weighted_norm(double r) const;

    FourierMatrixSeries truncated(double K) const;  // modes |k|_1 < K
    FourierMatrixSeries tail(double K) const;       // modes |k|_1 >= K
    FourierMatrixSeries minus_mean() const;

    FourierMatrixSeries shifted(const Torus& alpha) const;  // theta -> theta + alpha

    Mat2c eval(const Torus& theta) const;
    Mat2 eval_real(const Torus& theta) const { return mc_real_part(eval(theta)); }
    double reality_defect(int samples = 64) const;

    friend FourierMatrixSeries operator+(const FourierMatrixSeries& a,
                                         const FourierMatrixSeries& b);
    friend FourierMatrixSeries operator-(const FourierMatrixSeries& a,
                                         const FourierMatrixSeries& b);
    FourierMatrixSeries scaled(const cplx& s) const;

    // Convolution product keeping modes with |k|_1 <= k_cap.
    static FourierMatrixSeries mul(const FourierMatrixSeries& a,
                                   const FourierMatrixSeries& b, int k_cap);

  private:
    int dim_ = 1;
    double strip_r_ = 1.0;
    std::map<KVec, Mat2c> coeffs_;
};

int k_norm1(const KVec& k);

FourierMatrixSeries exp_series(const FourierMatrixSeries& x, int k_cap);
// log of id + W for |W| < 1.
FourierMatrixSeries log_near_identity(const FourierMatrixSeries& m, int k_cap);

}  // namespace kpplab::kam
