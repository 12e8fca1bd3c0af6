#include "ordlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ordlab::torus {

std::vector<unsigned long> first_primes(std::size_t n) {
  std::vector<unsigned long> out;
  out.reserve(n);
  unsigned long candidate = 2;
  while (out.size() < n) {
    bool prime = true;
    for (unsigned long p : out) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(candidate);
    ++candidate;
  }
  return out;
}

Window::Window(std::vector<Ordinal> coordinates) {
  std::set<Ordinal> sorted(coordinates.begin(), coordinates.end());
  coords_.assign(sorted.begin(), sorted.end());
  keys_.reserve(coords_.size());
  for (const auto& o : coords_) keys_.push_back(o.render());
  primes_ = first_primes(coords_.size());
}

std::shared_ptr<const Window> Window::over(std::vector<Ordinal> coordinates) {
  return std::make_shared<Window>(std::move(coordinates));
}

std::optional<std::size_t> Window::find(const Ordinal& alpha) const {
  auto it = std::lower_bound(coords_.begin(), coords_.end(), alpha);
  if (it == coords_.end() || *it != alpha) return std::nullopt;
  return static_cast<std::size_t>(it - coords_.begin());
}

std::size_t Window::index_of(const Ordinal& alpha) const {
  auto idx = find(alpha);
  if (!idx) throw std::out_of_range("coordinate not registered in window: " + alpha.render());
  return *idx;
}

Angle Window::generator(std::size_t index, unsigned precision_bits) const {
  const unsigned long p = primes_.at(index);
  const auto key = std::make_pair(index, precision_bits);
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Angle a = Angle::sqrt_frac(p, precision_bits);
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(key, std::move(a)).first->second;
}

bool Window::same_as(const Window& other) const {
  return this == &other || keys_ == other.keys_;
}

Angle z(const Window& window, const Ordinal& alpha, unsigned precision_bits) {
  return window.generator(window.index_of(alpha), precision_bits);
}

PointVector::PointVector(std::shared_ptr<const Window> window, std::vector<Coord> coords)
    : window_(std::move(window)), coords_(std::move(coords)) {
  if (coords_.size() != window_->size()) {
    throw std::invalid_argument("point vector: coordinate count does not match window");
  }
}

PointVector PointVector::identity(std::shared_ptr<const Window> window) {
  std::vector<Coord> coords(window->size());
  return PointVector(std::move(window), std::move(coords));
}

PointVector PointVector::multiply(const PointVector& other) const {
  if (!window_->same_as(*other.window_)) throw std::invalid_argument("point vector: window mismatch");
  std::vector<Coord> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    out[i].exponent = coords_[i].exponent + other.coords_[i].exponent;
    const unsigned s = std::max(coords_[i].offset.scale, other.coords_[i].offset.scale);
    out[i].offset = Dyadic(coords_[i].offset.at_scale(s) + other.coords_[i].offset.at_scale(s), s);
  }
  return PointVector(window_, std::move(out));
}

PointVector PointVector::invert() const {
  std::vector<Coord> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    out[i].exponent = -coords_[i].exponent;
    out[i].offset = Dyadic(-coords_[i].offset.num, coords_[i].offset.scale);
  }
  return PointVector(window_, std::move(out));
}

PointVector PointVector::power(const mpz_class& n) const {
  std::vector<Coord> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    out[i].exponent = coords_[i].exponent * n;
    out[i].offset = Dyadic(coords_[i].offset.num * n, coords_[i].offset.scale);
  }
  return PointVector(window_, std::move(out));
}

bool PointVector::identical_exponents(const PointVector& other) const {
  if (!window_->same_as(*other.window_)) return false;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i].exponent != other.coords_[i].exponent) return false;
    if (compare(coords_[i].offset, other.coords_[i].offset) != 0) return false;
  }
  return true;
}

Angle PointVector::value_at(std::size_t index, unsigned precision_bits) const {
  const Coord& c = coords_.at(index);
  if (c.exponent == 0) {
    return Angle::exact(c.offset);
  }
  const std::size_t extra = mpz_sizeinbase(c.exponent.get_mpz_t(), 2) + 2;
  const Angle theta = window_->generator(index, precision_bits + static_cast<unsigned>(extra));
  Angle scaled = theta.times(c.exponent);
  if (c.offset.num != 0) scaled = scaled.plus(Angle::exact(c.offset));
  return scaled;
}

std::vector<Angle> PointVector::values(unsigned precision_bits) const {
  std::vector<Angle> out;
  out.reserve(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) out.push_back(value_at(i, precision_bits));
  return out;
}

Angle o_angle(walks::Engine& engine, const Ordinal& alpha, const Ordinal& beta,
              const Window& window, unsigned precision_bits) {
  if (alpha >= beta) throw std::invalid_argument("o(alpha,beta): requires alpha < beta");
  const std::size_t idx = window.index_of(alpha);
  const mpz_class exponent = mpz_class(engine.osc(alpha, beta)) + 1;
  const std::size_t extra = mpz_sizeinbase(exponent.get_mpz_t(), 2) + 2;
  return window.generator(idx, precision_bits + static_cast<unsigned>(extra)).times(exponent);
}

std::vector<mpz_class> w_exponents(walks::Engine& engine, const Ordinal& beta,
                                   const Window& window) {
  std::vector<mpz_class> out;
  out.reserve(window.size());
  for (const auto& alpha : window.coordinates()) {
    if (alpha < beta) {
      out.emplace_back(mpz_class(engine.osc(alpha, beta)) + 1);
    } else {
      out.emplace_back(0);
    }
  }
  return out;
}

PointVector w_point(walks::Engine& engine, const Ordinal& beta,
                    std::shared_ptr<const Window> window) {
  const auto exps = w_exponents(engine, beta, *window);
  std::vector<Coord> coords(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) coords[i].exponent = exps[i];
  return PointVector(std::move(window), std::move(coords));
}

PointVector k_element(std::shared_ptr<const Window> window,
                      const std::vector<mpz_class>& exponents, const mpz_class& bound) {
  if (exponents.size() != window->size()) {
    throw std::invalid_argument("k_element: exponent count does not match window");
  }
  std::vector<Coord> coords(exponents.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (abs(exponents[i]) > bound) {
      throw std::invalid_argument("k_element: exponent exceeds declared bound");
    }
    coords[i].exponent = exponents[i];
  }
  return PointVector(std::move(window), std::move(coords));
}

// ---------------------------------------------------------------------------
// Kronecker
// ---------------------------------------------------------------------------

Angle OrbitPoint::at(unsigned precision_bits) const {
  if (prime == 0 || multiple == 0) return Angle::exact(offset);
  const std::size_t extra = mpz_sizeinbase(multiple.get_mpz_t(), 2) + 2;
  Angle theta = Angle::sqrt_frac(prime, precision_bits + static_cast<unsigned>(extra));
  Angle scaled = theta.times(multiple);
  if (offset.num != 0) scaled = scaled.plus(Angle::exact(offset));
  return scaled;
}

namespace {

void validate_inputs(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                     const std::vector<unsigned long>& z_primes) {
  if (u.size() != v.size() || u.size() != z_primes.size()) {
    throw std::invalid_argument("kronecker: u, v, z must share one length");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].prime != 0 && u[i].prime != z_primes[i]) {
      throw std::invalid_argument("kronecker: u coordinate generator mismatch");
    }
    if (v[i].prime != 0 && v[i].prime != z_primes[i]) {
      throw std::invalid_argument("kronecker: v coordinate generator mismatch");
    }
  }
}

OrbitPoint translate(const OrbitPoint& base, unsigned long prime, unsigned long m) {
  OrbitPoint out = base;
  if (m != 0) {
    out.prime = prime;
    out.multiple += m;
  }
  return out;
}

// Certified tri-state: does m land every coordinate inside the band?
Certified decide_m(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                   const std::vector<unsigned long>& z_primes, const ChordalBand& band,
                   unsigned long m, unsigned precision_bits) {
  bool unknown = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Angle a = translate(u[i], z_primes[i], m).at(precision_bits);
    const Angle b = v[i].at(precision_bits);
    switch (decide_within(circle_distance(a, b), band)) {
      case Certified::kOutside:
        return Certified::kOutside;
      case Certified::kUnknown:
        unknown = true;
        break;
      case Certified::kInside:
        break;
    }
  }
  return unknown ? Certified::kUnknown : Certified::kInside;
}

Certified decide_m_escalating(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                              const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                              unsigned long m, const KroneckerOptions& options,
                              unsigned* used_precision) {
  unsigned prec = options.precision_bits;
  while (true) {
    const ChordalBand band = chordal_band(epsilon, prec);
    const Certified c = decide_m(u, v, z_primes, band, m, prec);
    if (c != Certified::kUnknown) {
      if (used_precision) *used_precision = prec;
      return c;
    }
    if (prec >= options.max_precision_bits) {
      throw PrecisionError("kronecker: comparison undecidable at " + std::to_string(prec) +
                           " bits; retry with a higher precision limit");
    }
    prec = std::min(options.max_precision_bits, prec * 2);
  }
}

double frac_double(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;
  return f;
}

}  // namespace

KroneckerHit kronecker_m(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                         const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                         const KroneckerOptions& options) {
  validate_inputs(u, v, z_primes);
  const std::size_t k = u.size();
  KroneckerHit hit;

  const ChordalBand base_band = chordal_band(epsilon, options.precision_bits);
  if (base_band.covers_all) {
    hit.found = true;
    hit.m = 0;
    hit.precision_bits = options.precision_bits;
    return hit;
  }

  // Double prefilter: a candidate m is handed to the certified check only if
  // its approximate distances clear the band allowing generous slack; the
  // accumulated orbit is refreshed from exact values periodically so the
  // slack bound stays valid.
  constexpr unsigned long kRefresh = 4096;
  constexpr double kSlack = 1e-9;
  const double tau_hi = base_band.hi.approx() + kSlack;
  std::vector<double> zd(k), cur(k), vd(k);
  const unsigned approx_bits = 96;
  for (std::size_t i = 0; i < k; ++i) {
    zd[i] = frac_double(std::sqrt(static_cast<double>(z_primes[i])));
    vd[i] = v[i].at(approx_bits).midpoint().approx();
  }

  for (unsigned long m = 0; m < options.search_cap; ++m) {
    if (m % kRefresh == 0) {
      for (std::size_t i = 0; i < k; ++i) {
        cur[i] = translate(u[i], z_primes[i], m).at(approx_bits).midpoint().approx();
      }
    }
    bool candidate = true;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = frac_double(cur[i] - vd[i]);
      const double dist = std::min(d, 1.0 - d);
      if (dist > tau_hi) {
        candidate = false;
        break;
      }
    }
    if (candidate) {
      unsigned used = 0;
      if (decide_m_escalating(u, v, z_primes, epsilon, m, options, &used) == Certified::kInside) {
        hit.found = true;
        hit.m = m;
        hit.precision_bits = used;
        hit.scanned = m + 1;
        if (!kronecker_verify(u, v, z_primes, epsilon, m, used + 64)) {
          throw std::logic_error("kronecker: certified m failed independent verification");
        }
        return hit;
      }
    }
    for (std::size_t i = 0; i < k; ++i) cur[i] = frac_double(cur[i] + zd[i]);
  }
  hit.scanned = options.search_cap;
  return hit;
}

bool kronecker_verify(const std::vector<OrbitPoint>& u, const std::vector<OrbitPoint>& v,
                      const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                      unsigned long m, unsigned precision_bits) {
  validate_inputs(u, v, z_primes);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Angle a = translate(u[i], z_primes[i], m).at(precision_bits);
    const Angle b = v[i].at(precision_bits);
    if (verify_chordal_within(a, b, epsilon, precision_bits) != Certified::kInside) return false;
  }
  return true;
}

namespace {

// Power-of-two grid pitch below half the certified threshold.
unsigned long grid_dimension(const Dyadic& tau_lo) {
  if (tau_lo.num <= 0) throw PrecisionError("kronecker bound: threshold underflow");
  // Smallest power of two G with 1/G <= tau_lo/2.
  unsigned long g = 2;
  while (compare(Dyadic(2, 0), Dyadic(tau_lo.num * g, tau_lo.scale)) > 0) {
    g *= 2;
    if (g > (1ul << 26)) throw PrecisionError("kronecker bound: grid too fine");
  }
  return g;
}

}  // namespace

CoveringBound kronecker_bound(const std::vector<unsigned long>& z_primes,
                              const Rational& epsilon, const KroneckerOptions& options) {
  CoveringBound result;
  const std::size_t k = z_primes.size();
  if (k == 0) throw std::invalid_argument("kronecker bound: empty generator list");
  const ChordalBand band = chordal_band(epsilon, options.precision_bits);
  if (band.covers_all) {
    result.found = true;
    result.n = 1;
    result.grid_per_dim = 1;
    result.cells_total = 1;
    return result;
  }

  const unsigned long g = grid_dimension(band.lo);
  double cells_est = 1;
  for (std::size_t i = 0; i < k; ++i) cells_est *= static_cast<double>(g);
  if (cells_est > 4e7) throw std::invalid_argument("kronecker bound: covering grid too large");
  const unsigned long cells_total = static_cast<unsigned long>(cells_est);
  result.grid_per_dim = g;
  result.cells_total = cells_total;

  // margin = tau_lo - h/2 with h = 1/g; a cell center hit within the margin
  // puts its whole cell inside the true threshold.
  const unsigned gscale = static_cast<unsigned>(std::llround(std::log2(static_cast<double>(g))));
  const Dyadic margin = dyadic_sub(band.lo, Dyadic(1, gscale + 1));
  if (margin.num <= 0) throw PrecisionError("kronecker bound: margin underflow");

  std::vector<bool> covered(cells_total, false);
  unsigned long remaining = cells_total;
  const unsigned prec = options.precision_bits;

  std::vector<Angle> orbit(k);
  for (std::size_t i = 0; i < k; ++i) orbit[i] = Angle();  // m = 0: identity

  for (unsigned long m = 0; m < options.search_cap && remaining > 0; ++m) {
    if ((m & 1023) == 0) {
      // refresh intervals so widths stay tight
      for (std::size_t i = 0; i < k; ++i) {
        orbit[i] = OrbitPoint{z_primes[i], mpz_class(m), Dyadic()}.at(prec);
      }
    }
    // Coordinate-wise center candidates within the margin around the orbit.
    std::vector<std::vector<unsigned long>> hits(k);
    bool any_empty = false;
    for (std::size_t i = 0; i < k && !any_empty; ++i) {
      // centers are (2j+1)/(2g); |center - x| < margin
      // j range from (x - margin, x + margin)
      const Dyadic mid = orbit[i].midpoint();
      const double x = mid.approx();
      const double mg = margin.approx();
      const long j_lo = static_cast<long>(std::floor((x - mg) * g - 0.5)) - 1;
      const long j_hi = static_cast<long>(std::ceil((x + mg) * g - 0.5)) + 1;
      for (long j = j_lo; j <= j_hi; ++j) {
        const unsigned long jj = static_cast<unsigned long>(((j % static_cast<long>(g)) + g) % g);
        // exact check: circle distance from orbit point to center < margin
        const Angle center = Angle::exact(Dyadic(mpz_class(2 * jj + 1), gscale + 1));
        const auto dist = circle_distance(orbit[i], center);
        if (compare(dist.second, margin) < 0) {
          if (std::find(hits[i].begin(), hits[i].end(), jj) == hits[i].end()) hits[i].push_back(jj);
        }
      }
      if (hits[i].empty()) any_empty = true;
    }
    if (!any_empty) {
      // mark the cross product
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        unsigned long cell = 0;
        for (std::size_t i = 0; i < k; ++i) cell = cell * g + hits[i][pick[i]];
        if (!covered[cell]) {
          covered[cell] = true;
          --remaining;
        }
        std::size_t level = k;
        while (level > 0) {
          if (++pick[level - 1] < hits[level - 1].size()) break;
          pick[level - 1] = 0;
          --level;
        }
        if (level == 0) break;
      }
    }
    if (remaining == 0) {
      result.found = true;
      result.n = m + 1;
      return result;
    }
    for (std::size_t i = 0; i < k; ++i) {
      orbit[i] = orbit[i].plus(Angle::sqrt_frac(z_primes[i], prec));
    }
  }
  result.cells_uncovered = remaining;
  return result;
}

bool covering_certificate(const std::vector<unsigned long>& z_primes, const Rational& epsilon,
                          unsigned long n, const KroneckerOptions& options) {
  const std::size_t k = z_primes.size();
  const unsigned prec = options.precision_bits + 32;
  const ChordalBand band = chordal_band(epsilon, prec);
  if (band.covers_all) return n >= 1;
  const unsigned long g = grid_dimension(band.lo);
  const unsigned gscale = static_cast<unsigned>(std::llround(std::log2(static_cast<double>(g))));
  const Dyadic margin = dyadic_sub(band.lo, Dyadic(1, gscale + 1));
  if (margin.num <= 0) return false;

  // Walk all cells; for each, scan m < n for a certified approach.
  std::vector<unsigned long> cell(k, 0);
  while (true) {
    bool cell_ok = false;
    for (unsigned long m = 0; m < n && !cell_ok; ++m) {
      bool all = true;
      for (std::size_t i = 0; i < k; ++i) {
        const Angle x = OrbitPoint{z_primes[i], mpz_class(m), Dyadic()}.at(prec);
        const Angle center = Angle::exact(Dyadic(mpz_class(2 * cell[i] + 1), gscale + 1));
        if (compare(circle_distance(x, center).second, margin) >= 0) {
          all = false;
          break;
        }
      }
      cell_ok = all;
    }
    if (!cell_ok) return false;
    std::size_t level = k;
    while (level > 0) {
      if (++cell[level - 1] < g) break;
      cell[level - 1] = 0;
      --level;
    }
    if (level == 0) break;
  }
  return true;
}

Dyadic independence_margin(const std::vector<unsigned long>& primes,
                           const std::vector<long>& coeffs, unsigned precision_bits) {
  if (primes.size() != coeffs.size()) {
    throw std::invalid_argument("independence margin: length mismatch");
  }
  // Sum on the real line (no wrap-around), then distance to nearest integer.
  const unsigned s = precision_bits;
  mpz_class lo = 0, hi = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (coeffs[i] == 0) continue;
    mpz_class arg = primes[i];
    arg <<= 2 * s;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), arg.get_mpz_t());
    const mpz_class a = root, b = root + 1;
    if (coeffs[i] > 0) {
      lo += a * coeffs[i];
      hi += b * coeffs[i];
    } else {
      lo += b * coeffs[i];
      hi += a * coeffs[i];
    }
  }
  mpz_class unit = 1;
  unit <<= s;
  // nearest integer to the midpoint
  mpz_class two_mid = lo + hi;
  mpz_class rounded;  // floor((2*mid + unit) / (2*unit)) = nearest integer
  mpz_class num = two_mid + unit;
  mpz_class den = unit * 2;
  mpz_fdiv_q(rounded.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  // The interval is far narrower than 1, so only the nearest integer and its
  // two neighbors can realize the minimum distance.
  mpz_class best = unit;  // distance never exceeds 1 here
  for (int shift = -1; shift <= 1; ++shift) {
    const mpz_class target = (rounded + shift) * unit;
    if (lo <= target && target <= hi) return Dyadic(0, 0);
    const mpz_class da = abs(mpz_class(lo - target));
    const mpz_class db = abs(mpz_class(hi - target));
    best = std::min(best, std::min(da, db));
  }
  return Dyadic(best, s);
}

}  // namespace ordlab::torus
