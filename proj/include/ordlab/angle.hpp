#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace ordlab::torus {

// Raised when an interval comparison stays undecidable at the configured
// maximum precision; callers should retry with a higher precision limit.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact dyadic rational num / 2^scale.
struct Dyadic {
  mpz_class num;
  unsigned scale = 0;

  Dyadic() = default;
  Dyadic(mpz_class n, unsigned s) : num(std::move(n)), scale(s) {}
  static Dyadic zero() { return Dyadic(); }

  // Exact value, renumbered to a finer scale (s >= scale).
  mpz_class at_scale(unsigned s) const;
  double approx() const;
  // Decimal rendering, truncated toward zero, fixed number of fraction digits.
  std::string decimal(unsigned digits) const;
};

int compare(const Dyadic& a, const Dyadic& b);
inline bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
inline bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }
inline bool operator==(const Dyadic& a, const Dyadic& b) { return compare(a, b) == 0; }
Dyadic dyadic_sub(const Dyadic& a, const Dyadic& b);

// Exact rational, for target radii and tolerances given in decimal.
struct Rational {
  mpz_class num;
  mpz_class den = 1;  // > 0

  // Parses "0.05", "2", "1e-3", "-.5".
  static Rational from_decimal(const std::string& text);
  double approx() const;
};

// A closed interval [lo, hi] of dyadics at one scale, representing a point of
// the circle R/Z: the value is taken mod 1. Intervals live on the real line
// (hi may pass 1) and are kept normalized with lo in [0, 1). Arithmetic is
// exact on the endpoints; only constructions that introduce irrationals
// (square roots) carry width.
class Angle {
 public:
  Angle() = default;  // the exact identity [0, 0]

  static Angle exact(const Dyadic& d);
  // frac(sqrt(n)) enclosed at width 2^-scale; n must not be a perfect square.
  static Angle sqrt_frac(unsigned long n, unsigned scale);

  unsigned scale() const { return scale_; }
  Dyadic lo() const { return Dyadic(lo_, scale_); }
  Dyadic hi() const { return Dyadic(hi_, scale_); }
  Dyadic width() const { return Dyadic(hi_ - lo_, scale_); }
  Dyadic midpoint() const { return Dyadic(lo_ + hi_, scale_ + 1); }
  bool is_exact_zero() const { return lo_ == 0 && hi_ == 0; }

  Angle plus(const Angle& other) const;
  Angle negated() const;
  Angle times(const mpz_class& n) const;

  // True if, as subsets of the circle, other lies inside *this (used by the
  // soundness check: doubling the precision must nest).
  bool encloses_mod1(const Angle& other) const;

  std::string decimal_midpoint(unsigned digits) const;

 private:
  Angle(mpz_class lo, mpz_class hi, unsigned scale);
  void normalize();

  mpz_class lo_ = 0;
  mpz_class hi_ = 0;
  unsigned scale_ = 0;
};

// Circle distance |a - b| in R/Z as an enclosing dyadic interval; the true
// distance lies in [first, second], both within [0, 1/2].
std::pair<Dyadic, Dyadic> circle_distance(const Angle& a, const Angle& b);

// Threshold band for "chordal distance < eps": the circle distance t
// satisfies 2*sin(pi*t) < eps iff t < asin(eps/2)/pi. lo <= true threshold
// <= hi, certified by directed rounding. covers_all is set when eps exceeds
// the diameter, i.e. every pair of points qualifies.
struct ChordalBand {
  Dyadic lo;
  Dyadic hi;
  bool covers_all = false;
};
ChordalBand chordal_band(const Rational& epsilon, unsigned precision_bits);

enum class Certified { kInside, kOutside, kUnknown };

// Decides "circle distance < band" from an enclosing distance interval.
Certified decide_within(const std::pair<Dyadic, Dyadic>& dist, const ChordalBand& band);

// Independent verification route: evaluates the chordal distance
// 2*|sin(pi*(a-b))| by interval transcendentals (MPFR, directed rounding)
// and compares against epsilon exactly. No shared code with the band route.
Certified verify_chordal_within(const Angle& a, const Angle& b, const Rational& epsilon,
                                unsigned precision_bits);

}  // namespace ordlab::torus
