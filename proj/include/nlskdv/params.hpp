#pragma once

#include <string>

namespace nlskdv {

/// Reduced fraction with a positive, odd denominator.
struct Rational {
  long num = 1;
  long den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  /// "3/5" or "1"; throws ValidationError for an even denominator.
  static Rational parse(const std::string& text);
  static Rational make(long num, long den);
  std::string str() const;
  Rational plus(long whole) const { return make(num + whole * den, den); }

  bool operator==(const Rational&) const = default;
};

/// x^(a/b) for odd b, extended to negative x through the real odd root:
///
///   numerator a | x < 0 result
///   ------------+-------------------
///   even        |  |x|^(a/b)
///   odd         | -|x|^(a/b)
///
/// So v^3 keeps the sign of v and v^2 is non-negative, as for integers.
double signed_pow(double x, const Rational& power);

/// Physical constants of the coupled system plus the derived beta1, beta2.
class PhysParams {
 public:
  PhysParams() : PhysParams(1.0, 1.0, 1.0, Rational{1, 1}, 1.0) {}
  PhysParams(double alpha, double tau1, double tau2, Rational p, double q);

  double alpha() const noexcept { return alpha_; }
  double tau1() const noexcept { return tau1_; }
  double tau2() const noexcept { return tau2_; }
  const Rational& p() const noexcept { return p_; }
  double p_value() const noexcept { return p_.value(); }
  double q() const noexcept { return q_; }
  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return beta2_; }

  /// p + 2 and p + 1 as exact fractions for the signed powers of v.
  Rational p_plus_2() const { return p_.plus(2); }
  Rational p_plus_1() const { return p_.plus(1); }

  /// True when p < 4/3, the range covered by the stability result.
  bool within_stability_range() const noexcept { return 3 * p_.num < 4 * p_.den; }

  PhysParams with_alpha(double alpha) const { return {alpha, tau1_, tau2_, p_, q_}; }

 private:
  double alpha_;
  double tau1_;
  double tau2_;
  Rational p_;
  double q_;
  double beta1_;
  double beta2_;
};

}  // namespace nlskdv
