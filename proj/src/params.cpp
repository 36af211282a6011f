#include "nlskdv/params.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "nlskdv/error.hpp"

namespace nlskdv {

Rational Rational::make(long num, long den) {
  if (den == 0) throw ValidationError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (den % 2 == 0) {
    throw ValidationError("p must have an odd denominator, got " + std::to_string(num) + "/" +
                          std::to_string(den));
  }
  return Rational{num, den};
}

Rational Rational::parse(const std::string& text) {
  try {
    const auto slash = text.find('/');
    size_t used = 0;
    if (slash == std::string::npos) {
      const long n = std::stol(text, &used);
      if (used != text.size()) throw ValidationError("bad rational '" + text + "'");
      return make(n, 1);
    }
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    size_t ua = 0, ub = 0;
    const long n = std::stol(a, &ua);
    const long d = std::stol(b, &ub);
    if (ua != a.size() || ub != b.size()) throw ValidationError("bad rational '" + text + "'");
    return make(n, d);
  } catch (const std::logic_error&) {
    throw ValidationError("bad rational '" + text + "'");
  }
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

double signed_pow(double x, const Rational& power) {
  const double mag = std::pow(std::abs(x), power.value());
  if (x >= 0.0) return mag;
  return (power.num % 2 == 0) ? mag : -mag;
}

PhysParams::PhysParams(double alpha, double tau1, double tau2, Rational p, double q)
    : alpha_(alpha), tau1_(tau1), tau2_(tau2), p_(Rational::make(p.num, p.den)), q_(q) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be >= 0");
  if (!(tau1 >= 0.0) || !std::isfinite(tau1)) throw ValidationError("tau1 must be >= 0");
  if (!(tau2 >= 0.0) || !std::isfinite(tau2)) throw ValidationError("tau2 must be >= 0");
  if (!(q >= 1.0 && q < 4.0)) throw ValidationError("q must lie in [1, 4)");
  const double pv = p_.value();
  if (!(pv >= 1.0 && pv < 4.0)) throw ValidationError("p must lie in [1, 4)");
  beta1_ = 2.0 * tau1_ / (q_ + 2.0);
  beta2_ = 2.0 * tau2_ / ((pv + 1.0) * (pv + 2.0));
}

}  // namespace nlskdv
