#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ordlab/ordinal.hpp"

namespace ordlab::walks {

// nth point (n >= 0) of the canonical fundamental sequence of a limit ordinal:
// write beta = prefix + w^(e) (one copy of the last term peeled off); then
//   e = d+1  ->  beta[n] = prefix + w^(d)*(n+1)
//   e limit  ->  beta[n] = prefix + w^(e[n])
// Strictly increasing in n, each point < beta, sup = beta.
Ordinal ladder_point(const Ordinal& beta, const mpz_class& n);

// The C-set the walk descends through. Every C is rooted at 0:
//   C_1        = {0}
//   C_(g+1)    = {0, g}
//   C_(limit b)= {0} u {b[n] : n in N}
// The root keeps lower traces nonempty on every walk that targets a
// positive ordinal, which the trace properties below rely on.
struct StepInfo {
  Ordinal next;                       // min(C_from \ alpha)
  mpz_class ladder_below;             // |C_from ∩ alpha|
  std::optional<Ordinal> ladder_max;  // max(C_from ∩ alpha), absent if empty
};
StepInfo walk_step(const Ordinal& from, const Ordinal& alpha);

struct WalkStep {
  Ordinal from;
  StepInfo info;
};

// Descending walk beta = b_0 > b_1 > ... > b_k = alpha with
// b_{i+1} = min(C_{b_i} \ alpha). steps is empty iff alpha == beta.
struct WalkTrace {
  Ordinal alpha;
  Ordinal beta;
  std::vector<WalkStep> steps;

  // beta, b_1, ..., alpha (always ends at alpha; single element iff alpha==beta).
  std::vector<Ordinal> chain() const;
};

// Requires alpha <= beta; throws std::invalid_argument otherwise.
WalkTrace walk(const Ordinal& alpha, const Ordinal& beta);

// Lower trace L(alpha,beta): the ladder maxima collected along the walk,
// as a strictly increasing sequence. Satisfies, exactly:
//   (i)  L(a,b) ⊂ a, and L(a,b) = {} iff a = 0 or a = b.
using LowerTrace = std::vector<Ordinal>;
LowerTrace lower_trace(const WalkTrace& trace);
LowerTrace lower_trace(const Ordinal& alpha, const Ordinal& beta);

// Memoizing facade over walks: e-values, lower traces and oscillation numbers
// for repeated sweeps. Values are deterministic, so concurrent fills of the
// same key are benign; the maps are guarded by a shared mutex.
//
// The coherent family (e_g): e_g(xi) combines a structural size of xi (the
// family stays finite-to-one) with a small hash term that depends on xi alone
// off the descent chain of g (the walk g -> 1) and is re-keyed by g on it.
// For a pair g < g' the values differ only on the two finite chains, and the
// differences carry both signs, which keeps the oscillation sets non-trivial.
class Engine {
 public:
  // e_beta(alpha), the coherent family member at beta evaluated below it;
  // requires alpha < beta. e_beta(0) = 0.
  mpz_class e_value(const Ordinal& alpha, const Ordinal& beta);

  const LowerTrace& lower(const Ordinal& alpha, const Ordinal& beta);

  // Osc(e_a, e_b, L(a,b)): members xi of L \ {min L} with
  // e_a(xi-) == e_b(xi-) and e_a(xi) > e_b(xi), xi- the predecessor in L.
  std::vector<Ordinal> osc_set(const Ordinal& alpha, const Ordinal& beta);

  // osc(a,b) = |osc_set(a,b)|; memoized; alpha < beta.
  std::size_t osc(const Ordinal& alpha, const Ordinal& beta);

  std::size_t cached_pairs() const;

 private:
  const std::unordered_set<std::string>& chain_of(const Ordinal& g);

  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, LowerTrace> lower_;
  std::unordered_map<std::string, mpz_class> e_;
  std::unordered_map<std::string, std::size_t> osc_;
  std::unordered_map<std::string, std::unordered_set<std::string>> chains_;
};

// Definition-transcription oscillation: linear ladder scans, fresh walks,
// no memo tables and no search shortcuts. Verification path for witnesses
// and the dual-oracle suite; intended for desk-scale pairs.
std::size_t osc_direct(const Ordinal& alpha, const Ordinal& beta);

// Deterministic finite sample of ordinals below `bound`:
// starts from the finite ordinals below min(bound, breadth), then `depth`
// times adds the first `breadth` ladder points of every included limit and
// of `bound` itself, keeping points below bound (finite points also below
// breadth). bound must be positive.
std::vector<Ordinal> staircase(const Ordinal& bound, unsigned depth, unsigned breadth);

}  // namespace ordlab::walks
