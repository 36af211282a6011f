#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nlskdv {

using cdouble = std::complex<double>;

/// Uniform periodic grid on [-L, L) with FFT-ordered wavenumbers.
///
/// Sample j sits at x_j = -L + j*dx, so x = 0 is sample n/2. The wavenumber
/// of mode j is pi*j/L for j < n/2 and pi*(j-n)/L otherwise; the Nyquist mode
/// j = n/2 carries -pi*n/(2L).
class Grid1D {
 public:
  Grid1D(double half_length, int n);

  double half_length() const noexcept { return half_length_; }
  int size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double x(int j) const noexcept { return -half_length_ + j * dx_; }
  int center_index() const noexcept { return n_ / 2; }
  int nyquist_index() const noexcept { return n_ / 2; }
  std::span<const double> wavenumbers() const noexcept { return k_; }
  double k_max() const noexcept;

  bool operator==(const Grid1D& other) const noexcept {
    return n_ == other.n_ && half_length_ == other.half_length_;
  }

 private:
  double half_length_;
  int n_;
  double dx_;
  std::vector<double> k_;
};

using GridPtr = std::shared_ptr<const Grid1D>;

GridPtr make_grid(double half_length, int n);

/// Real samples on a grid. Holds v, g, psi and friends.
struct RealField {
  GridPtr grid;
  std::vector<double> values;

  RealField() = default;
  explicit RealField(GridPtr g);
  RealField(GridPtr g, std::vector<double> v);

  int size() const noexcept { return static_cast<int>(values.size()); }
  double& operator[](int j) { return values[j]; }
  double operator[](int j) const { return values[j]; }
  bool all_finite() const noexcept;
};

/// Complex samples on a grid. Holds u, f, phi and Phi.
struct ComplexField {
  GridPtr grid;
  std::vector<cdouble> values;

  ComplexField() = default;
  explicit ComplexField(GridPtr g);
  ComplexField(GridPtr g, std::vector<cdouble> v);
  explicit ComplexField(const RealField& re);

  int size() const noexcept { return static_cast<int>(values.size()); }
  cdouble& operator[](int j) { return values[j]; }
  cdouble operator[](int j) const { return values[j]; }
  bool all_finite() const noexcept;
  RealField real() const;
  RealField imag() const;
  RealField modulus() const;
};

RealField sample(const GridPtr& grid, const std::function<double(double)>& fn);
ComplexField sample_complex(const GridPtr& grid, const std::function<cdouble(double)>& fn);

void require_same_grid(const GridPtr& a, const GridPtr& b);
void require_finite(const RealField& f, const char* name);
void require_finite(const ComplexField& f, const char* name);

namespace fft {

/// Unnormalized forward DFT: out_j = sum_m in_m exp(-2 pi i j m / n).
void forward(std::span<const cdouble> in, std::span<cdouble> out);
/// Inverse DFT including the 1/n factor, so inverse(forward(f)) == f.
void inverse(std::span<const cdouble> in, std::span<cdouble> out);

}  // namespace fft

std::vector<cdouble> spectrum(const RealField& f);
std::vector<cdouble> spectrum(const ComplexField& f);
ComplexField from_spectrum(const GridPtr& grid, std::span<const cdouble> hat);
/// Real part of the inverse transform.
RealField real_from_spectrum(const GridPtr& grid, std::span<const cdouble> hat);

/// Multiplier (i k)^order for mode j, with the Nyquist mode removed for odd orders.
cdouble derivative_symbol(const Grid1D& grid, int j, int order);

RealField deriv(const RealField& f, int order = 1);
ComplexField deriv(const ComplexField& f, int order = 1);

/// dx * sum of samples (rectangle rule, exact trapezoid on a periodic grid).
double integrate(const RealField& f);
cdouble integrate(const ComplexField& f);
double integrate(const Grid1D& grid, std::span<const double> values);

/// Real L2 inner product Re ∫ a conj(b) dx.
double inner(const RealField& a, const RealField& b);
double inner(const ComplexField& a, const ComplexField& b);
double norm_sq(const RealField& f);
double norm_sq(const ComplexField& f);
double norm(const RealField& f);
double norm(const ComplexField& f);

/// Squared H^1 norm ∫ |f|^2 + |f'|^2, computed from the spectrum.
double h1_norm_sq(const RealField& f);
double h1_norm_sq(const ComplexField& f);

/// Spectral translation x -> f(x - shift). Exact for band-limited fields.
RealField translate(const RealField& f, double shift);
ComplexField translate(const ComplexField& f, double shift);

/// max(|f(-L)|, |f(L - dx)|) / max|f|, zero for the zero field.
double boundary_leak(const RealField& f);
double boundary_leak(const ComplexField& f);

// Elementwise helpers used across the numerical modules.
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cdouble s, const ComplexField& a);

}  // namespace nlskdv
