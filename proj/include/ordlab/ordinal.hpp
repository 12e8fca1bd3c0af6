#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordlab {

// Ordinal literal syntax error, with a 0-based character position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position)
      : std::runtime_error(std::move(message)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct OrdinalTerm;

// An ordinal below epsilon_0 in Cantor normal form:
//
//   w^(e_1)*c_1 + ... + w^(e_k)*c_k,   e_1 > ... > e_k,   c_i >= 1,
//
// where each exponent e_i is itself an Ordinal. The empty term list is 0.
// Values are immutable once built; all operations are pure.
class Ordinal {
 public:
  using Term = OrdinalTerm;

  Ordinal();  // zero
  explicit Ordinal(unsigned long n);
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal from_nat(const mpz_class& n);
  static Ordinal omega();
  // w^(exp)*coeff, coeff >= 1
  static Ordinal omega_power(const Ordinal& exp, const mpz_class& coeff = 1);
  // Builds from explicit terms; exponents must be strictly decreasing.
  static Ordinal from_terms(std::vector<Term> terms);

  bool is_zero() const;
  bool is_finite() const;
  bool is_limit() const;
  bool is_successor() const { return !is_zero() && !is_limit(); }

  const std::vector<Term>& terms() const { return terms_; }
  // Trailing coefficient at exponent 0, or 0 when absent.
  const mpz_class& finite_part() const;
  // As a natural number; throws std::invalid_argument if not finite.
  const mpz_class& to_nat() const;

  Ordinal successor() const;
  // Predecessor of a successor ordinal; throws otherwise.
  Ordinal predecessor() const;

  // Splits off one copy of the last CNF term: *this = prefix + w^(last_exponent),
  // where prefix keeps the remaining coefficient. Requires a non-zero ordinal.
  struct Peeled;
  Peeled peel_last() const;

  std::string render() const;
  static Ordinal parse(const std::string& text);

  std::size_t size_in_terms() const;  // total term count, recursively

 private:
  std::vector<Term> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  mpz_class coefficient;  // >= 1
};

struct Ordinal::Peeled {
  Ordinal prefix;
  Ordinal last_exponent;
};

inline Ordinal::Ordinal() = default;
inline Ordinal::Ordinal(const Ordinal&) = default;
inline Ordinal::Ordinal(Ordinal&&) noexcept = default;
inline Ordinal& Ordinal::operator=(const Ordinal&) = default;
inline Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
inline Ordinal::~Ordinal() = default;

inline bool Ordinal::is_zero() const { return terms_.empty(); }

// Total order on ordinals: -1, 0, +1.
int compare(const Ordinal& a, const Ordinal& b);

inline bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == 0; }
inline bool operator!=(const Ordinal& a, const Ordinal& b) { return compare(a, b) != 0; }
inline bool operator<(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0; }
inline bool operator<=(const Ordinal& a, const Ordinal& b) { return compare(a, b) <= 0; }
inline bool operator>(const Ordinal& a, const Ordinal& b) { return compare(a, b) > 0; }
inline bool operator>=(const Ordinal& a, const Ordinal& b) { return compare(a, b) >= 0; }

// Ordinal addition (left absorption of small terms). Associative; add(a,0)=a.
Ordinal add(const Ordinal& a, const Ordinal& b);

}  // namespace ordlab
