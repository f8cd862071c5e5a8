#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "kw/rational.hpp"

namespace kw {

// An exact angle, stored as a rational multiple of pi. All structural
// arithmetic (sums, comparisons, reduction mod 2*pi, parity tests) is exact;
// conversion to radians is the one lossy operation.
class AnglePi {
 public:
  constexpr AnglePi() = default;
  explicit AnglePi(Rat units) : units_(units) {}

  // (num/den) * pi
  static AnglePi of(long long num, long long den) { return AnglePi(Rat(num, den)); }
  static AnglePi zero() { return AnglePi(Rat(0)); }
  static AnglePi pi() { return AnglePi(Rat(1)); }
  static AnglePi two_pi() { return AnglePi(Rat(2)); }

  // value / pi as an exact rational
  const Rat& units() const { return units_; }

  friend AnglePi operator+(const AnglePi& a, const AnglePi& b) {
    return AnglePi(a.units_ + b.units_);
  }
  friend AnglePi operator-(const AnglePi& a, const AnglePi& b) {
    return AnglePi(a.units_ - b.units_);
  }
  AnglePi operator-() const { return AnglePi(-units_); }
  AnglePi& operator+=(const AnglePi& o) {
    units_ += o.units_;
    return *this;
  }
  AnglePi& operator-=(const AnglePi& o) {
    units_ -= o.units_;
    return *this;
  }
  friend AnglePi operator*(long long k, const AnglePi& a) {
    return AnglePi(Rat(k) * a.units_);
  }
  AnglePi half() const { return AnglePi(units_ / Rat(2)); }

  friend bool operator==(const AnglePi& a, const AnglePi& b) { return a.units_ == b.units_; }
  friend bool operator!=(const AnglePi& a, const AnglePi& b) { return !(a == b); }
  friend bool operator<(const AnglePi& a, const AnglePi& b) { return a.units_ < b.units_; }
  friend bool operator>(const AnglePi& a, const AnglePi& b) { return b < a; }
  friend bool operator<=(const AnglePi& a, const AnglePi& b) { return !(b < a); }
  friend bool operator>=(const AnglePi& a, const AnglePi& b) { return !(a < b); }

  // representative in [0, 2*pi)
  AnglePi mod_two_pi() const { return AnglePi(units_.mod(2)); }

  bool is_zero() const { return units_.is_zero(); }
  bool is_zero_mod_two_pi() const { return units_.mod(2).is_zero(); }
  bool is_pi_mod_two_pi() const { return units_.mod(2) == Rat(1); }

  // angle == 2*pi*k for integer k
  bool is_multiple_of_two_pi() const {
    return units_.is_integer() && units_.num() % 2 == 0;
  }
  // angle == 2*pi*k with k odd
  bool is_odd_multiple_of_two_pi() const {
    return is_multiple_of_two_pi() && (units_.num() / 2) % 2 != 0;
  }
  // k such that angle == 2*pi*k; caller checks is_multiple_of_two_pi first
  long long two_pi_multiplier() const { return units_.num() / 2; }

  double radians() const { return units_.value() * M_PI; }

  // exp(i * angle), reduced mod 2*pi before evaluating; quarter turns come
  // out exact so that sign-valued cocycles really are +-1
  std::complex<double> phase() const {
    Rat r = units_.mod(2);
    if (r == Rat(0)) return {1.0, 0.0};
    if (r == Rat(1, 2)) return {0.0, 1.0};
    if (r == Rat(1)) return {-1.0, 0.0};
    if (r == Rat(3, 2)) return {0.0, -1.0};
    double x = r.value() * M_PI;
    return {std::cos(x), std::sin(x)};
  }

  std::string str() const { return units_.str() + "*pi"; }

 private:
  Rat units_;
};

inline double cos(const AnglePi& a) { return std::cos(a.radians()); }
inline double sin(const AnglePi& a) { return std::sin(a.radians()); }
inline double tan(const AnglePi& a) { return std::tan(a.radians()); }

}  // namespace kw
