#include "ordlab/ordinal.hpp"

#include <cctype>
#include <utility>

namespace ordlab {

namespace {

const mpz_class kZero = 0;

void check_decreasing(const std::vector<Ordinal::Term>& terms) {
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    if (compare(terms[i].exponent, terms[i + 1].exponent) <= 0) {
      throw std::invalid_argument("ordinal terms: exponents not strictly decreasing");
    }
  }
  for (const auto& t : terms) {
    if (t.coefficient < 1) {
      throw std::invalid_argument("ordinal terms: coefficient must be >= 1");
    }
  }
}

}  // namespace

Ordinal::Ordinal(unsigned long n) { *this = from_nat(mpz_class(n)); }

Ordinal Ordinal::from_nat(const mpz_class& n) {
  if (n < 0) throw std::invalid_argument("ordinal: negative natural");
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal(), n});
  return o;
}

Ordinal Ordinal::omega() { return omega_power(from_nat(1), 1); }

Ordinal Ordinal::omega_power(const Ordinal& exp, const mpz_class& coeff) {
  if (coeff < 1) throw std::invalid_argument("ordinal: coefficient must be >= 1");
  Ordinal o;
  o.terms_.push_back(Term{exp, coeff});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  check_decreasing(terms);
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

bool Ordinal::is_limit() const {
  return !terms_.empty() && !terms_.back().exponent.is_zero();
}

const mpz_class& Ordinal::finite_part() const {
  if (!terms_.empty() && terms_.back().exponent.is_zero()) {
    return terms_.back().coefficient;
  }
  return kZero;
}

const mpz_class& Ordinal::to_nat() const {
  if (!is_finite()) throw std::invalid_argument("ordinal: not a natural number");
  return finite_part();
}

Ordinal Ordinal::successor() const { return add(*this, from_nat(1)); }

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw std::invalid_argument("ordinal: predecessor of a non-successor");
  Ordinal o = *this;
  auto& last = o.terms_.back();
  last.coefficient -= 1;
  if (last.coefficient == 0) o.terms_.pop_back();
  return o;
}

Ordinal::Peeled Ordinal::peel_last() const {
  if (is_zero()) throw std::invalid_argument("ordinal: peel of zero");
  Peeled p;
  p.last_exponent = terms_.back().exponent;
  p.prefix = *this;
  auto& last = p.prefix.terms_.back();
  last.coefficient -= 1;
  if (last.coefficient == 0) p.prefix.terms_.pop_back();
  return p;
}

std::size_t Ordinal::size_in_terms() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n += 1 + t.exponent.size_in_terms();
  return n;
}

int compare(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(ta[i].exponent, tb[i].exponent);
    if (c != 0) return c;
    c = cmp(ta[i].coefficient, tb[i].coefficient);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (ta.size() == tb.size()) return 0;
  return ta.size() < tb.size() ? -1 : 1;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& head_exp = b.terms()[0].exponent;
  std::vector<Ordinal::Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  // Terms of a with exponent below b's head are absorbed.
  std::size_t keep = 0;
  while (keep < a.terms().size() && compare(a.terms()[keep].exponent, head_exp) > 0) ++keep;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(a.terms()[i]);
  if (keep < a.terms().size() && compare(a.terms()[keep].exponent, head_exp) == 0) {
    out.push_back(Ordinal::Term{head_exp, a.terms()[keep].coefficient + b.terms()[0].coefficient});
  } else {
    out.push_back(b.terms()[0]);
  }
  for (std::size_t i = 1; i < b.terms().size(); ++i) out.push_back(b.terms()[i]);
  return Ordinal::from_terms(std::move(out));
}

// ---------------------------------------------------------------------------
// Literal grammar:
//   sum  := term ("+" term)*
//   term := "w^(" sum ")" ("*" nat)? | "w" ("*" nat)? | nat
// Canonical rendering elides "*1" and writes exponent 1 as plain "w".
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("ordinal literal: " + what + " at position " + std::to_string(pos), pos);
  }

  mpz_class parse_nat() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected a natural number");
    return mpz_class(text.substr(start, pos - start));
  }

  // One CNF term as (exponent, coefficient); coefficient 0 only for the literal "0".
  Ordinal::Term parse_term() {
    skip_ws();
    const std::size_t term_pos = pos;
    if (pos < text.size() && text[pos] == 'w') {
      ++pos;
      Ordinal exp = Ordinal::from_nat(1);
      if (eat('^')) {
        if (!eat('(')) fail("expected '(' after '^'");
        exp = parse_sum();
        if (!eat(')')) fail("expected ')'");
      }
      mpz_class coeff = 1;
      if (eat('*')) {
        coeff = parse_nat();
        if (coeff == 0) {
          pos = term_pos;
          fail("zero coefficient");
        }
      }
      return Ordinal::Term{exp, coeff};
    }
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      mpz_class n = parse_nat();
      return Ordinal::Term{Ordinal(), n};  // coefficient may be 0: handled by caller
    }
    fail("expected 'w' or a natural number");
  }

  Ordinal parse_sum() {
    std::vector<Ordinal::Term> terms;
    while (true) {
      skip_ws();
      const std::size_t term_pos = pos;
      Ordinal::Term t = parse_term();
      if (t.coefficient == 0) {
        // "0" is only valid as the whole (sub)literal.
        if (!terms.empty()) {
          pos = term_pos;
          fail("zero term in a sum");
        }
        skip_ws();
        if (pos < text.size() && text[pos] == '+') fail("zero term in a sum");
        return Ordinal();
      }
      if (!terms.empty() && compare(terms.back().exponent, t.exponent) <= 0) {
        pos = term_pos;
        fail("exponents not strictly decreasing");
      }
      terms.push_back(std::move(t));
      if (!eat('+')) break;
    }
    return Ordinal::from_terms(std::move(terms));
  }
};

void render_into(const Ordinal& o, std::string& out) {
  if (o.is_zero()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const auto& t : o.terms()) {
    if (!first) out += '+';
    first = false;
    if (t.exponent.is_zero()) {
      out += t.coefficient.get_str();
      continue;
    }
    out += 'w';
    const bool exp_is_one = t.exponent.is_finite() && t.exponent.finite_part() == 1;
    if (!exp_is_one) {
      out += "^(";
      render_into(t.exponent, out);
      out += ')';
    }
    if (t.coefficient != 1) {
      out += '*';
      out += t.coefficient.get_str();
    }
  }
}

}  // namespace

std::string Ordinal::render() const {
  std::string out;
  render_into(*this, out);
  return out;
}

Ordinal Ordinal::parse(const std::string& text) {
  Parser p(text);
  Ordinal o = p.parse_sum();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return o;
}

}  // namespace ordlab
