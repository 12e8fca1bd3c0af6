#include "ordlab/walks.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ordlab::walks {

namespace {

constexpr std::size_t kWalkStepCap = 1u << 20;  // never hit; guards the descent loop

std::string pair_key(const Ordinal& a, const Ordinal& b) {
  return a.render() + "|" + b.render();
}

// --- the coherent family (e_g) ---------------------------------------------
//
// e_g(xi) = S(xi) * 4 + noise, where S is a structural size (so the family is
// finite-to-one: only finitely many ordinals share a size) and noise < 4 is a
// hash of xi alone, except on the finite descent chain of g (the walk g -> 1),
// where it is re-keyed by g. Two e's therefore differ only on the chains, a
// finite set per pair, and the differences carry both signs along lower
// traces. Walk-weight statistics cannot serve here: over these ladders they
// are monotone in the walk start, which empties every oscillation set.

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

mpz_class coefficient_sum(const Ordinal& o) {
  mpz_class total = 0;
  for (const auto& t : o.terms()) total += t.coefficient + coefficient_sum(t.exponent);
  return total;
}

mpz_class structural_size(const Ordinal& xi) {
  const mpz_class coeffs = coefficient_sum(xi);
  return mpz_class(xi.size_in_terms()) + mpz_sizeinbase(coeffs.get_mpz_t(), 2);
}

constexpr std::uint64_t kNoiseModulus = 4;

mpz_class e_from(const Ordinal& xi, const Ordinal& g, bool on_chain) {
  if (xi.is_zero()) return 0;
  const std::string xr = xi.render();
  std::uint64_t noise = fnv1a64(xr);
  if (on_chain) noise += fnv1a64(xr + "#" + g.render());
  return structural_size(xi) * kNoiseModulus + (noise % kNoiseModulus);
}

// Ordinals visited by the walk g -> 1 (inclusive); empty for g = 0.
std::vector<Ordinal> descent_chain(const Ordinal& g) {
  if (g.is_zero()) return {};
  const Ordinal one = Ordinal::from_nat(1);
  if (g == one) return {one};
  return walk(one, g).chain();
}

}  // namespace

Ordinal ladder_point(const Ordinal& beta, const mpz_class& n) {
  if (!beta.is_limit()) throw std::invalid_argument("ladder_point: not a limit ordinal");
  if (n < 0) throw std::invalid_argument("ladder_point: negative index");
  const auto peeled = beta.peel_last();
  const Ordinal& e = peeled.last_exponent;
  if (e.is_limit()) {
    return add(peeled.prefix, Ordinal::omega_power(ladder_point(e, n)));
  }
  // e = d+1: step through w^(d)*(n+1).
  const Ordinal d = e.predecessor();
  if (d.is_zero()) return add(peeled.prefix, Ordinal::from_nat(n + 1));
  return add(peeled.prefix, Ordinal::omega_power(d, n + 1));
}

StepInfo walk_step(const Ordinal& from, const Ordinal& alpha) {
  if (alpha >= from) throw std::invalid_argument("walk_step: alpha must be below from");
  StepInfo info;
  if (alpha.is_zero()) {
    info.next = Ordinal();  // the root 0 is the least element of every C
    info.ladder_below = 0;
    return info;
  }
  if (from.is_successor()) {
    // C = {0, from-1}; alpha <= from-1, so the step lands on the predecessor.
    info.next = from.predecessor();
    info.ladder_below = 1;
    info.ladder_max = Ordinal();
    return info;
  }
  // Limit: find the least n with from[n] >= alpha by doubling then bisection.
  Ordinal first = ladder_point(from, 0);
  if (first >= alpha) {
    info.next = std::move(first);
    info.ladder_below = 1;  // just the root
    info.ladder_max = Ordinal();
    return info;
  }
  mpz_class lo = 0;  // from[lo] < alpha
  mpz_class hi = 1;
  while (ladder_point(from, hi) < alpha) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (ladder_point(from, mid) < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  info.next = ladder_point(from, hi);
  info.ladder_below = hi + 1;  // root plus from[0..hi-1]
  info.ladder_max = ladder_point(from, hi - 1);
  return info;
}

std::vector<Ordinal> WalkTrace::chain() const {
  std::vector<Ordinal> out;
  out.reserve(steps.size() + 1);
  out.push_back(beta);
  for (const auto& s : steps) out.push_back(s.info.next);
  return out;
}

WalkTrace walk(const Ordinal& alpha, const Ordinal& beta) {
  if (alpha > beta) throw std::invalid_argument("walk: alpha must be <= beta");
  WalkTrace trace;
  trace.alpha = alpha;
  trace.beta = beta;
  Ordinal cur = beta;
  while (cur > alpha) {
    if (trace.steps.size() >= kWalkStepCap) {
      throw std::logic_error("walk: descent exceeded the step cap");
    }
    StepInfo info = walk_step(cur, alpha);
    Ordinal next = info.next;
    trace.steps.push_back(WalkStep{std::move(cur), std::move(info)});
    cur = std::move(next);
  }
  return trace;
}

LowerTrace lower_trace(const WalkTrace& trace) {
  std::set<Ordinal> acc;
  for (const auto& s : trace.steps) {
    if (s.info.ladder_max) acc.insert(*s.info.ladder_max);
  }
  return LowerTrace(acc.begin(), acc.end());
}

LowerTrace lower_trace(const Ordinal& alpha, const Ordinal& beta) {
  return lower_trace(walk(alpha, beta));
}

mpz_class Engine::e_value(const Ordinal& alpha, const Ordinal& beta) {
  if (alpha >= beta) throw std::invalid_argument("e_value: requires alpha < beta");
  const std::string key = pair_key(alpha, beta);
  {
    std::shared_lock lock(mutex_);
    auto it = e_.find(key);
    if (it != e_.end()) return it->second;
  }
  const bool on_chain = chain_of(beta).count(alpha.render()) > 0;
  mpz_class value = e_from(alpha, beta, on_chain);
  std::unique_lock lock(mutex_);
  return e_.emplace(key, std::move(value)).first->second;
}

const std::unordered_set<std::string>& Engine::chain_of(const Ordinal& g) {
  const std::string key = g.render();
  {
    std::shared_lock lock(mutex_);
    auto it = chains_.find(key);
    if (it != chains_.end()) return it->second;
  }
  std::unordered_set<std::string> members;
  for (const auto& o : descent_chain(g)) members.insert(o.render());
  std::unique_lock lock(mutex_);
  return chains_.emplace(key, std::move(members)).first->second;
}

const LowerTrace& Engine::lower(const Ordinal& alpha, const Ordinal& beta) {
  const std::string key = pair_key(alpha, beta);
  {
    std::shared_lock lock(mutex_);
    auto it = lower_.find(key);
    if (it != lower_.end()) return it->second;
  }
  LowerTrace lt = lower_trace(alpha, beta);
  std::unique_lock lock(mutex_);
  return lower_.emplace(key, std::move(lt)).first->second;
}

std::vector<Ordinal> Engine::osc_set(const Ordinal& alpha, const Ordinal& beta) {
  if (alpha >= beta) throw std::invalid_argument("osc: requires alpha < beta");
  const LowerTrace lt = lower(alpha, beta);  // copy; e_value below may rehash
  std::vector<Ordinal> out;
  for (std::size_t i = 1; i < lt.size(); ++i) {
    const Ordinal& xi = lt[i];
    const Ordinal& prev = lt[i - 1];
    if (e_value(prev, alpha) == e_value(prev, beta) &&
        e_value(xi, alpha) > e_value(xi, beta)) {
      out.push_back(xi);
    }
  }
  return out;
}

std::size_t Engine::osc(const Ordinal& alpha, const Ordinal& beta) {
  const std::string key = pair_key(alpha, beta);
  {
    std::shared_lock lock(mutex_);
    auto it = osc_.find(key);
    if (it != osc_.end()) return it->second;
  }
  const std::size_t value = osc_set(alpha, beta).size();
  std::unique_lock lock(mutex_);
  return osc_.emplace(key, value).first->second;
}

std::size_t Engine::cached_pairs() const {
  std::shared_lock lock(mutex_);
  return osc_.size();
}

// ---------------------------------------------------------------------------
// Direct path: everything below re-derives the definitions with linear ladder
// scans and no shared state. Kept deliberately separate from the code above.
// ---------------------------------------------------------------------------

namespace {

struct DirectStep {
  Ordinal next;
  mpz_class weight;              // |C ∩ alpha|
  std::optional<Ordinal> top;    // max(C ∩ alpha)
};

DirectStep direct_step(const Ordinal& from, const Ordinal& alpha) {
  DirectStep out;
  // Enumerate C_from in increasing order: 0, then predecessor or ladder points.
  std::optional<Ordinal> last_below;
  mpz_class count = 0;
  if (Ordinal() < alpha) {
    last_below = Ordinal();
    count = 1;
  } else {
    out.next = Ordinal();
    out.weight = 0;
    return out;
  }
  if (from.is_successor()) {
    out.next = from.predecessor();  // alpha < from implies alpha <= predecessor
  } else {
    mpz_class n = 0;
    while (true) {
      Ordinal p = ladder_point(from, n);
      if (p >= alpha) {
        out.next = std::move(p);
        break;
      }
      count += 1;
      last_below = std::move(p);
      n += 1;
    }
  }
  out.weight = count;
  out.top = last_below;
  return out;
}

std::vector<Ordinal> direct_lower(const Ordinal& alpha, const Ordinal& beta) {
  std::set<Ordinal> acc;
  Ordinal cur = beta;
  while (cur > alpha) {
    DirectStep s = direct_step(cur, alpha);
    if (s.top) acc.insert(*s.top);
    cur = s.next;
  }
  return std::vector<Ordinal>(acc.begin(), acc.end());
}

mpz_class direct_e(const Ordinal& alpha, const Ordinal& beta) {
  // Fresh linear recomputation of the chain membership each time.
  bool on_chain = false;
  if (!beta.is_zero()) {
    const Ordinal one = Ordinal::from_nat(1);
    Ordinal cur = beta;
    while (true) {
      if (cur == alpha) {
        on_chain = true;
        break;
      }
      if (cur <= one) break;
      cur = direct_step(cur, one).next;
    }
  }
  return e_from(alpha, beta, on_chain);
}

}  // namespace

std::size_t osc_direct(const Ordinal& alpha, const Ordinal& beta) {
  if (alpha >= beta) throw std::invalid_argument("osc_direct: requires alpha < beta");
  const std::vector<Ordinal> lt = direct_lower(alpha, beta);
  std::size_t count = 0;
  for (std::size_t i = 1; i < lt.size(); ++i) {
    if (direct_e(lt[i - 1], alpha) == direct_e(lt[i - 1], beta) &&
        direct_e(lt[i], alpha) > direct_e(lt[i], beta)) {
      ++count;
    }
  }
  return count;
}

std::vector<Ordinal> staircase(const Ordinal& bound, unsigned depth, unsigned breadth) {
  if (bound.is_zero()) throw std::invalid_argument("staircase: bound must be positive");
  std::set<Ordinal> s;
  const mpz_class breadth_z = breadth;
  mpz_class finite_cap = breadth_z;
  if (bound.is_finite() && bound.finite_part() < finite_cap) finite_cap = bound.finite_part();
  for (mpz_class k = 0; k < finite_cap; ++k) s.insert(Ordinal::from_nat(k));

  auto admit = [&](const Ordinal& p) {
    if (p >= bound) return false;
    if (p.is_finite() && p.finite_part() >= breadth_z) return false;
    return true;
  };

  for (unsigned round = 0; round < depth; ++round) {
    std::vector<Ordinal> limits;
    if (bound.is_limit()) limits.push_back(bound);
    for (const auto& o : s) {
      if (o.is_limit()) limits.push_back(o);
    }
    bool grew = false;
    for (const auto& lim : limits) {
      for (unsigned n = 0; n < breadth; ++n) {
        Ordinal p = ladder_point(lim, n);
        if (admit(p) && s.insert(std::move(p)).second) grew = true;
      }
    }
    if (!grew) break;
  }
  return std::vector<Ordinal>(s.begin(), s.end());
}

}  // namespace ordlab::walks
