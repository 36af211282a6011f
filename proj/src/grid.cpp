#include "nlskdv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlskdv/error.hpp"

namespace nlskdv {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

Grid1D::Grid1D(double half_length, int n) : half_length_(half_length), n_(n) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ValidationError("grid: half length must be positive and finite");
  }
  if (n < 8 || n % 2 != 0) {
    throw ValidationError("grid: sample count must be even and at least 8, got " +
                          std::to_string(n));
  }
  dx_ = 2.0 * half_length / n;
  k_.resize(n);
  const double base = std::numbers::pi / half_length;
  for (int j = 0; j < n; ++j) {
    const int m = j < n / 2 ? j : j - n;
    k_[j] = base * m;
  }
}

double Grid1D::k_max() const noexcept { return std::numbers::pi * n_ / (2.0 * half_length_); }

GridPtr make_grid(double half_length, int n) {
  return std::make_shared<const Grid1D>(half_length, n);
}

RealField::RealField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

RealField::RealField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid->size()) {
    throw ValidationError("field: sample count does not match grid");
  }
}

bool RealField::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

ComplexField::ComplexField(GridPtr g) : grid(std::move(g)), values(grid->size(), cdouble{}) {}

ComplexField::ComplexField(GridPtr g, std::vector<cdouble> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid->size()) {
    throw ValidationError("field: sample count does not match grid");
  }
}

ComplexField::ComplexField(const RealField& re)
    : grid(re.grid), values(re.values.begin(), re.values.end()) {}

bool ComplexField::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](cdouble z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

RealField ComplexField::real() const {
  RealField out(grid);
  for (int j = 0; j < size(); ++j) out[j] = values[j].real();
  return out;
}

RealField ComplexField::imag() const {
  RealField out(grid);
  for (int j = 0; j < size(); ++j) out[j] = values[j].imag();
  return out;
}

RealField ComplexField::modulus() const {
  RealField out(grid);
  for (int j = 0; j < size(); ++j) out[j] = std::abs(values[j]);
  return out;
}

RealField sample(const GridPtr& grid, const std::function<double(double)>& fn) {
  RealField out(grid);
  for (int j = 0; j < grid->size(); ++j) out[j] = fn(grid->x(j));
  return out;
}

ComplexField sample_complex(const GridPtr& grid, const std::function<cdouble(double)>& fn) {
  ComplexField out(grid);
  for (int j = 0; j < grid->size(); ++j) out[j] = fn(grid->x(j));
  return out;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b) throw ValidationError("field has no grid");
  if (a != b && !(*a == *b)) throw ValidationError("fields live on different grids");
}

void require_finite(const RealField& f, const char* name) {
  if (!f.all_finite()) throw ValidationError(std::string(name) + " has non-finite samples");
}

void require_finite(const ComplexField& f, const char* name) {
  if (!f.all_finite()) throw ValidationError(std::string(name) + " has non-finite samples");
}

std::vector<cdouble> spectrum(const RealField& f) {
  std::vector<cdouble> in(f.values.begin(), f.values.end());
  std::vector<cdouble> out(in.size());
  fft::forward(in, out);
  return out;
}

std::vector<cdouble> spectrum(const ComplexField& f) {
  std::vector<cdouble> out(f.values.size());
  fft::forward(f.values, out);
  return out;
}

ComplexField from_spectrum(const GridPtr& grid, std::span<const cdouble> hat) {
  ComplexField out(grid);
  fft::inverse(hat, out.values);
  return out;
}

RealField real_from_spectrum(const GridPtr& grid, std::span<const cdouble> hat) {
  std::vector<cdouble> tmp(hat.size());
  fft::inverse(hat, tmp);
  RealField out(grid);
  for (int j = 0; j < grid->size(); ++j) out[j] = tmp[j].real();
  return out;
}

cdouble derivative_symbol(const Grid1D& grid, int j, int order) {
  if (order % 2 != 0 && j == grid.nyquist_index()) return 0.0;
  const cdouble ik{0.0, grid.wavenumbers()[j]};
  cdouble m = 1.0;
  for (int o = 0; o < order; ++o) m *= ik;
  return m;
}

namespace {

std::vector<cdouble> apply_derivative(const Grid1D& grid, std::vector<cdouble> hat, int order) {
  if (order < 1) throw ValidationError("deriv: order must be positive");
  for (int j = 0; j < grid.size(); ++j) hat[j] *= derivative_symbol(grid, j, order);
  return hat;
}

}  // namespace

RealField deriv(const RealField& f, int order) {
  auto hat = apply_derivative(*f.grid, spectrum(f), order);
  return real_from_spectrum(f.grid, hat);
}

ComplexField deriv(const ComplexField& f, int order) {
  auto hat = apply_derivative(*f.grid, spectrum(f), order);
  return from_spectrum(f.grid, hat);
}

double integrate(const Grid1D& grid, std::span<const double> values) {
  long double acc = 0.0L;
  for (double v : values) acc += v;
  return static_cast<double>(acc) * grid.dx();
}

double integrate(const RealField& f) { return integrate(*f.grid, f.values); }

cdouble integrate(const ComplexField& f) {
  long double re = 0.0L, im = 0.0L;
  for (const auto& z : f.values) {
    re += z.real();
    im += z.imag();
  }
  return cdouble(static_cast<double>(re), static_cast<double>(im)) * f.grid->dx();
}

double inner(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  long double acc = 0.0L;
  for (int j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return static_cast<double>(acc) * a.grid->dx();
}

double inner(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid);
  long double acc = 0.0L;
  for (int j = 0; j < a.size(); ++j) {
    acc += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
  }
  return static_cast<double>(acc) * a.grid->dx();
}

double norm_sq(const RealField& f) { return inner(f, f); }
double norm_sq(const ComplexField& f) { return inner(f, f); }
double norm(const RealField& f) { return std::sqrt(norm_sq(f)); }
double norm(const ComplexField& f) { return std::sqrt(norm_sq(f)); }

namespace {

double h1_from_spectrum(const Grid1D& grid, std::span<const cdouble> hat) {
  long double acc = 0.0L;
  for (int j = 0; j < grid.size(); ++j) {
    const double k = j == grid.nyquist_index() ? 0.0 : grid.wavenumbers()[j];
    acc += (1.0 + k * k) * std::norm(hat[j]);
  }
  return static_cast<double>(acc) * grid.dx() / grid.size();
}

std::vector<cdouble> shifted_spectrum(const Grid1D& grid, std::vector<cdouble> hat, double shift) {
  for (int j = 0; j < grid.size(); ++j) {
    if (j == grid.nyquist_index()) {
      // Keep the Nyquist mode real-symmetric: use cos(k y) for the shift.
      hat[j] *= std::cos(grid.wavenumbers()[j] * shift);
    } else {
      hat[j] *= std::polar(1.0, -grid.wavenumbers()[j] * shift);
    }
  }
  return hat;
}

template <typename Field>
double leak_of(const Field& f) {
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
  return edge / peak;
}

}  // namespace

double h1_norm_sq(const RealField& f) { return h1_from_spectrum(*f.grid, spectrum(f)); }
double h1_norm_sq(const ComplexField& f) { return h1_from_spectrum(*f.grid, spectrum(f)); }

RealField translate(const RealField& f, double shift) {
  return real_from_spectrum(f.grid, shifted_spectrum(*f.grid, spectrum(f), shift));
}

ComplexField translate(const ComplexField& f, double shift) {
  return from_spectrum(f.grid, shifted_spectrum(*f.grid, spectrum(f), shift));
}

double boundary_leak(const RealField& f) { return leak_of(f); }
double boundary_leak(const ComplexField& f) { return leak_of(f); }

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  RealField out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

RealField operator-(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  RealField out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

RealField operator*(double s, const RealField& a) {
  RealField out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = s * a[j];
  return out;
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid);
  ComplexField out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid);
  ComplexField out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

ComplexField operator*(cdouble s, const ComplexField& a) {
  ComplexField out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = s * a[j];
  return out;
}

}  // namespace nlskdv
