#include "ordlab/angle.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ordlab::torus {

// ---------------------------------------------------------------------------
// Dyadic
// ---------------------------------------------------------------------------

mpz_class Dyadic::at_scale(unsigned s) const {
  if (s < scale) throw std::invalid_argument("dyadic: coarser rescale would round");
  mpz_class out = num;
  out <<= (s - scale);
  return out;
}

double Dyadic::approx() const {
  // Cheap and fine for display/prefiltering; exact paths never use this.
  signed long e = -static_cast<signed long>(scale);
  return mpz_get_d(num.get_mpz_t()) * std::pow(2.0, static_cast<double>(e));
}

std::string Dyadic::decimal(unsigned digits) const {
  mpz_class n = num;
  const bool neg = n < 0;
  if (neg) n = -n;
  mpz_class pow10 = 1;
  for (unsigned i = 0; i < digits; ++i) pow10 *= 10;
  mpz_class scaled = (n * pow10) >> scale;  // truncated toward zero
  mpz_class ip = scaled / pow10;
  mpz_class fp = scaled % pow10;
  std::string frac = fp.get_str();
  if (frac.size() < digits) frac.insert(0, digits - frac.size(), '0');
  std::string out = (neg ? "-" : "") + ip.get_str();
  if (digits > 0) out += "." + frac;
  return out;
}

int compare(const Dyadic& a, const Dyadic& b) {
  const unsigned s = std::max(a.scale, b.scale);
  const int c = cmp(a.at_scale(s), b.at_scale(s));
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Dyadic dyadic_sub(const Dyadic& a, const Dyadic& b) {
  const unsigned s = std::max(a.scale, b.scale);
  return Dyadic(a.at_scale(s) - b.at_scale(s), s);
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

Rational Rational::from_decimal(const std::string& text) {
  std::size_t i = 0;
  const auto fail = [&]() { throw std::invalid_argument("bad decimal literal: " + text); };
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      break;
    } else {
      fail();
    }
  }
  long exp10 = 0;
  if (i < text.size()) {  // exponent part
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    if (i == text.size()) fail();
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
      exp10 = exp10 * 10 + (text[i] - '0');
    }
    if (eneg) exp10 = -exp10;
  }
  if (!seen_digit) fail();
  Rational r;
  r.num = mpz_class(digits.empty() ? "0" : digits);
  if (neg) r.num = -r.num;
  long net = exp10 - frac_digits;
  r.den = 1;
  if (net >= 0) {
    for (long k = 0; k < net; ++k) r.num *= 10;
  } else {
    for (long k = 0; k < -net; ++k) r.den *= 10;
  }
  return r;
}

double Rational::approx() const {
  return mpz_get_d(num.get_mpz_t()) / mpz_get_d(den.get_mpz_t());
}

// ---------------------------------------------------------------------------
// Angle
// ---------------------------------------------------------------------------

Angle::Angle(mpz_class lo, mpz_class hi, unsigned scale)
    : lo_(std::move(lo)), hi_(std::move(hi)), scale_(scale) {
  normalize();
}

void Angle::normalize() {
  if (lo_ > hi_) throw std::logic_error("angle: inverted interval");
  mpz_class unit = 1;
  unit <<= scale_;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), lo_.get_mpz_t(), unit.get_mpz_t());
  if (q != 0) {
    lo_ -= q * unit;
    hi_ -= q * unit;
  }
}

Angle Angle::exact(const Dyadic& d) { return Angle(d.num, d.num, d.scale); }

Angle Angle::sqrt_frac(unsigned long n, unsigned scale) {
  mpz_class arg = n;
  arg <<= 2 * scale;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), arg.get_mpz_t());
  return Angle(root, root + 1, scale);
}

Angle Angle::plus(const Angle& other) const {
  const unsigned s = std::max(scale_, other.scale_);
  return Angle(lo().at_scale(s) + other.lo().at_scale(s),
               hi().at_scale(s) + other.hi().at_scale(s), s);
}

Angle Angle::negated() const { return Angle(-hi_, -lo_, scale_); }

Angle Angle::times(const mpz_class& n) const {
  if (n >= 0) return Angle(lo_ * n, hi_ * n, scale_);
  return Angle(hi_ * n, lo_ * n, scale_);
}

bool Angle::encloses_mod1(const Angle& other) const {
  const unsigned s = std::max(scale_, other.scale_);
  const mpz_class a_lo = lo().at_scale(s), a_hi = hi().at_scale(s);
  const mpz_class b_lo = other.lo().at_scale(s), b_hi = other.hi().at_scale(s);
  mpz_class unit = 1;
  unit <<= s;
  for (int k = -1; k <= 1; ++k) {
    const mpz_class shift = k * unit;
    if (a_lo <= b_lo + shift && b_hi + shift <= a_hi) return true;
  }
  return false;
}

std::string Angle::decimal_midpoint(unsigned digits) const {
  return midpoint().decimal(digits);
}

// ---------------------------------------------------------------------------
// Circle distance
// ---------------------------------------------------------------------------

namespace {

// min(x mod 1, 1 - x mod 1) at scale s, for x given as a numerator at scale s.
mpz_class tent(const mpz_class& x, unsigned s) {
  mpz_class unit = 1;
  unit <<= s;
  mpz_class m;
  mpz_fdiv_r(m.get_mpz_t(), x.get_mpz_t(), unit.get_mpz_t());
  mpz_class other = unit - m;
  return std::min(m, other);
}

}  // namespace

std::pair<Dyadic, Dyadic> circle_distance(const Angle& a, const Angle& b) {
  const Angle d = a.plus(b.negated());  // normalized: lo in [0, 1)
  const unsigned s = d.scale();
  mpz_class unit = 1;
  unit <<= s;
  const mpz_class l = d.lo().num, h = d.hi().num;
  if (h - l >= unit) {  // interval covers the whole circle
    return {Dyadic(0, 0), Dyadic(unit / 2, s)};
  }
  const mpz_class fl = tent(l, s), fh = tent(h, s);
  mpz_class dlo = std::min(fl, fh);
  mpz_class dhi = std::max(fl, fh);
  if (h >= unit) dlo = 0;  // the interval passes an integer
  const mpz_class half = unit / 2;
  const mpz_class three_half = half * 3;
  if ((l <= half && half <= h) || (l <= three_half && three_half <= h)) dhi = half;
  return {Dyadic(dlo, s), Dyadic(dhi, s)};
}

// ---------------------------------------------------------------------------
// MPFR-backed thresholds and the independent chordal route
// ---------------------------------------------------------------------------

namespace {

struct Mpfr {
  mpfr_t x;
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(x, prec); }
  ~Mpfr() { mpfr_clear(x); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

Dyadic dyadic_from_mpfr(const mpfr_t x, bool round_up) {
  if (mpfr_zero_p(x)) return Dyadic(0, 0);
  mpz_class m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  if (e >= 0) {
    m <<= e;
    return Dyadic(m, 0);
  }
  const unsigned long shift = static_cast<unsigned long>(-e);
  if (shift > 1u << 24) {
    // Absurdly fine exponent; clamp by rounding outward at a sane scale.
    return round_up ? Dyadic(1, 0) : Dyadic(0, 0);
  }
  return Dyadic(m, static_cast<unsigned>(shift));
}

void mpfr_set_dyadic(mpfr_t out, const Dyadic& d, mpfr_rnd_t rnd) {
  Mpfr num(std::max<mpfr_prec_t>(mpz_sizeinbase(d.num.get_mpz_t(), 2) + 2, 16));
  mpfr_set_z(num.x, d.num.get_mpz_t(), MPFR_RNDN);  // exact at this precision
  mpfr_div_2ui(out, num.x, d.scale, rnd);
}

}  // namespace

ChordalBand chordal_band(const Rational& epsilon, unsigned precision_bits) {
  if (epsilon.num <= 0 || epsilon.den <= 0) {
    throw std::invalid_argument("epsilon must be positive");
  }
  ChordalBand band;
  if (epsilon.num > 2 * epsilon.den) {  // radius beyond the diameter
    band.lo = Dyadic(1, 1);
    band.hi = Dyadic(1, 1);
    band.covers_all = true;
    return band;
  }
  const mpfr_prec_t prec = precision_bits + 32;
  Mpfr num(prec), den(prec), x(prec), a(prec), pi(prec), t(prec);
  mpfr_set_z(num.x, epsilon.num.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(den.x, epsilon.den.get_mpz_t(), MPFR_RNDN);
  mpfr_mul_2ui(den.x, den.x, 1, MPFR_RNDN);  // 2*den, exact

  // Lower edge: round everything toward smaller t.
  mpfr_div(x.x, num.x, den.x, MPFR_RNDD);
  if (mpfr_cmp_ui(x.x, 1) > 0) mpfr_set_ui(x.x, 1, MPFR_RNDD);
  mpfr_asin(a.x, x.x, MPFR_RNDD);
  mpfr_const_pi(pi.x, MPFR_RNDU);
  mpfr_div(t.x, a.x, pi.x, MPFR_RNDD);
  band.lo = dyadic_from_mpfr(t.x, false);

  // Upper edge.
  mpfr_div(x.x, num.x, den.x, MPFR_RNDU);
  if (mpfr_cmp_ui(x.x, 1) > 0) mpfr_set_ui(x.x, 1, MPFR_RNDU);
  mpfr_asin(a.x, x.x, MPFR_RNDU);
  mpfr_const_pi(pi.x, MPFR_RNDD);
  mpfr_div(t.x, a.x, pi.x, MPFR_RNDU);
  band.hi = dyadic_from_mpfr(t.x, true);
  return band;
}

Certified decide_within(const std::pair<Dyadic, Dyadic>& dist, const ChordalBand& band) {
  if (band.covers_all) return Certified::kInside;
  if (compare(dist.second, band.lo) < 0) return Certified::kInside;
  if (compare(dist.first, band.hi) >= 0) return Certified::kOutside;
  return Certified::kUnknown;
}

namespace {

// 2*sin(pi*m) bounds at an exact dyadic circle point m in [0, 1).
void chord_at(const Dyadic& m, mpfr_prec_t prec, mpfr_t out_lo, mpfr_t out_hi) {
  Mpfr md(prec), pi_lo(prec), pi_hi(prec), arg_lo(prec), arg_hi(prec), s1(prec), s2(prec);
  mpfr_const_pi(pi_lo.x, MPFR_RNDD);
  mpfr_const_pi(pi_hi.x, MPFR_RNDU);
  mpfr_set_dyadic(md.x, m, MPFR_RNDD);
  mpfr_mul(arg_lo.x, pi_lo.x, md.x, MPFR_RNDD);
  mpfr_set_dyadic(md.x, m, MPFR_RNDU);
  mpfr_mul(arg_hi.x, pi_hi.x, md.x, MPFR_RNDU);
  // sin on [0, pi] attains its minimum over a subinterval at an endpoint.
  mpfr_sin(s1.x, arg_lo.x, MPFR_RNDD);
  mpfr_sin(s2.x, arg_hi.x, MPFR_RNDD);
  if (mpfr_cmp(s1.x, s2.x) > 0) mpfr_swap(s1.x, s2.x);
  mpfr_mul_2ui(out_lo, s1.x, 1, MPFR_RNDD);
  // Maximum: 1 if the argument interval may contain pi/2, else an endpoint.
  Mpfr half_pi_lo(prec), half_pi_hi(prec);
  mpfr_div_2ui(half_pi_lo.x, pi_lo.x, 1, MPFR_RNDD);
  mpfr_div_2ui(half_pi_hi.x, pi_hi.x, 1, MPFR_RNDU);
  if (mpfr_cmp(arg_lo.x, half_pi_hi.x) <= 0 && mpfr_cmp(half_pi_lo.x, arg_hi.x) <= 0) {
    mpfr_set_ui(out_hi, 2, MPFR_RNDU);
  } else {
    mpfr_sin(s1.x, arg_lo.x, MPFR_RNDU);
    mpfr_sin(s2.x, arg_hi.x, MPFR_RNDU);
    if (mpfr_cmp(s1.x, s2.x) < 0) mpfr_swap(s1.x, s2.x);
    mpfr_mul_2ui(out_hi, s1.x, 1, MPFR_RNDU);
  }
}

}  // namespace

Certified verify_chordal_within(const Angle& a, const Angle& b, const Rational& epsilon,
                                unsigned precision_bits) {
  if (epsilon.num > 2 * epsilon.den) return Certified::kInside;
  const Angle d = a.plus(b.negated());
  const unsigned s = d.scale();
  mpz_class unit = 1;
  unit <<= s;
  const mpz_class l = d.lo().num, h = d.hi().num;
  const mpfr_prec_t prec = precision_bits + 32;

  Mpfr chord_lo(prec), chord_hi(prec), c1(prec), c2(prec);
  if (h - l >= unit) {
    mpfr_set_ui(chord_lo.x, 0, MPFR_RNDD);
    mpfr_set_ui(chord_hi.x, 2, MPFR_RNDU);
  } else {
    mpz_class lm, hm;
    mpz_fdiv_r(lm.get_mpz_t(), l.get_mpz_t(), unit.get_mpz_t());
    hm = lm + (h - l);  // endpoint positions in [0, 2)
    chord_at(Dyadic(lm, s), prec, c1.x, chord_lo.x);
    chord_at(Dyadic(hm, s), prec, c2.x, chord_hi.x);
    // lower bound: min of endpoint lows, or 0 if an integer is inside
    if (mpfr_cmp(c2.x, c1.x) < 0) mpfr_swap(c1.x, c2.x);
    if (hm >= unit) {
      mpfr_set_ui(c1.x, 0, MPFR_RNDD);
    }
    // upper bound: max of endpoint highs, or 2 if a half-integer is inside
    if (mpfr_cmp(chord_lo.x, chord_hi.x) > 0) mpfr_swap(chord_lo.x, chord_hi.x);
    const mpz_class half = unit / 2, three_half = 3 * (unit / 2);
    if ((lm <= half && half <= hm) || (lm <= three_half && three_half <= hm)) {
      mpfr_set_ui(chord_hi.x, 2, MPFR_RNDU);
    }
    mpfr_swap(chord_lo.x, c1.x);
  }

  Mpfr eps_lo(prec), eps_hi(prec), num(prec), den(prec);
  mpfr_set_z(num.x, epsilon.num.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(den.x, epsilon.den.get_mpz_t(), MPFR_RNDN);
  mpfr_div(eps_lo.x, num.x, den.x, MPFR_RNDD);
  mpfr_div(eps_hi.x, num.x, den.x, MPFR_RNDU);
  if (mpfr_cmp(chord_hi.x, eps_lo.x) < 0) return Certified::kInside;
  if (mpfr_cmp(chord_lo.x, eps_hi.x) >= 0) return Certified::kOutside;
  return Certified::kUnknown;
}

}  // namespace ordlab::torus
