#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordlab/angle.hpp"
#include "ordlab/ordinal.hpp"
#include "ordlab/walks.hpp"

namespace ordlab::torus {

// First n primes, ascending.
std::vector<unsigned long> first_primes(std::size_t n);

// A finite ordered set of coordinates with the generator assignment
// theta_alpha = frac(sqrt(p)) for the prime p matching alpha's rank in the
// window. Immutable after construction; generator intervals are cached per
// (index, precision).
class Window {
 public:
  explicit Window(std::vector<Ordinal> coordinates);  // sorts and dedupes
  static std::shared_ptr<const Window> over(std::vector<Ordinal> coordinates);

  std::size_t size() const { return coords_.size(); }
  const std::vector<Ordinal>& coordinates() const { return coords_; }
  std::optional<std::size_t> find(const Ordinal& alpha) const;
  // Throws std::out_of_range if alpha was not registered in this window.
  std::size_t index_of(const Ordinal& alpha) const;
  unsigned long prime(std::size_t index) const { return primes_.at(index); }

  // theta at the given coordinate, width <= 2^-precision_bits.
  Angle generator(std::size_t index, unsigned precision_bits) const;

  bool same_as(const Window& other) const;

 private:
  std::vector<Ordinal> coords_;
  std::vector<std::string> keys_;  // rendered, aligned with coords_
  std::vector<unsigned long> primes_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::size_t, unsigned>, Angle> cache_;
};

// theta_alpha; throws std::out_of_range when alpha is outside the window.
Angle z(const Window& window, const Ordinal& alpha, unsigned precision_bits);

// One coordinate of a point: frac(exponent * theta + offset). Group
// operations act on this exact form, so no interval slack accumulates.
struct Coord {
  mpz_class exponent;
  Dyadic offset;
};

class PointVector {
 public:
  PointVector(std::shared_ptr<const Window> window, std::vector<Coord> coords);
  static PointVector identity(std::shared_ptr<const Window> window);

  const Window& window() const { return *window_; }
  const std::shared_ptr<const Window>& window_ptr() const { return window_; }
  const std::vector<Coord>& coords() const { return coords_; }

  PointVector multiply(const PointVector& other) const;  // windows must match
  PointVector invert() const;
  PointVector power(const mpz_class& n) const;

  bool identical_exponents(const PointVector& other) const;

  Angle value_at(std::size_t index, unsigned precision_bits) const;
  std::vector<Angle> values(unsigned precision_bits) const;

 private:
  std::shared_ptr<const Window> window_;
  std::vector<Coord> coords_;
};

// o(alpha, beta) = z_alpha^(osc(alpha,beta)+1); requires alpha < beta and
// alpha in the window.
Angle o_angle(walks::Engine& engine, const Ordinal& alpha, const Ordinal& beta,
              const Window& window, unsigned precision_bits);

// Exponent vector of w_beta on the window: osc(alpha,beta)+1 when alpha<beta,
// 0 otherwise. Exact integers; restriction comparisons use these directly.
std::vector<mpz_class> w_exponents(walks::Engine& engine, const Ordinal& beta,
                                   const Window& window);

PointVector w_point(walks::Engine& engine, const Ordinal& beta,
                    std::shared_ptr<const Window> window);

// (z_alpha^{p_alpha}) with |p_alpha| <= bound; violations are rejected.
PointVector k_element(std::shared_ptr<const Window> window,
                      const std::vector<mpz_class>& exponents, const mpz_class& bound);

// --- Kronecker search -------------------------------------------------------

// A re-evaluatable circle point multiple*sqrt(prime) + offset (prime 0 means
// the point is the exact dyadic offset).
struct OrbitPoint {
  unsigned long prime = 0;
  mpz_class multiple;
  Dyadic offset;

  Angle at(unsigned precision_bits) const;
  static OrbitPoint exact(Dyadic d) { return OrbitPoint{0, 0, std::move(d)}; }
};

struct KroneckerOptions {
  unsigned precision_bits = 128;
  unsigned max_precision_bits = 2048;
  unsigned long search_cap = 2000000;
};

struct KroneckerHit {
  bool found = false;
  unsigned long m = 0;
  unsigned precision_bits = 0;  // precision of the successful certification
  unsigned long scanned = 0;
};

// Least m < search_cap with |u_i z_i^m - v_i| < epsilon (chordal) for all i,
// certified in interval arithmetic; every skipped m is certified to fail at
// some coordinate. The returned m is re-checked through the independent
// chordal route before being reported. Throws PrecisionError if a comparison
// stays undecidable at max_precision_bits.
KroneckerHit kronecker_m(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                         const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                         const KroneckerOptions& options);

// Independent certification that m satisfies (or fails) the bound above.
bool kronecker_verify(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                      const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                      unsigned long m, unsigned precision_bits);

struct CoveringBound {
  bool found = false;
  unsigned long n = 0;          // valid uniform bound: every cell hit by m < n
  unsigned long grid_per_dim = 0;
  unsigned long cells_total = 0;
  unsigned long cells_uncovered = 0;  // diagnostics when not found
};

// Uniform Kronecker bound by certified covering: a power-of-two grid of
// cells is chosen with pitch below half the chordal threshold, and orbit
// translates are scanned until every cell center is approached with margin.
CoveringBound kronecker_bound(const std::vector<unsigned long>& z_primes,
                              const Rational& epsilon, const KroneckerOptions& options);

// Re-checks a claimed bound n from scratch with fresh intervals.
bool covering_certificate(const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                          unsigned long n, const KroneckerOptions& options);

// Lower bound for |sum_i coeffs_i * sqrt(primes_i) - nearest integer| as an
// exact dyadic (possibly 0 when the interval straddles an integer).
Dyadic independence_margin(const std::vector<unsigned long>& primes,
                           const std::vector<long>& coeffs, unsigned precision_bits);

}  // namespace ordlab::torus
