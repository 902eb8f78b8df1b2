// Bordered algebras B(m,k), their idempotent-windowed subalgebras C(n),
// and the dual algebras with E-generators, over F2.
//
// Elements are represented in triple normal form: a pure element is a pair
// of idempotent states together with a weight per place, plus link-variable
// exponents and (for dual algebras) an ordered E-set.  All half-integer
// quantities (weights, gradings) are stored doubled.

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hfl {

using Idem = uint32_t;  // bitmask over positions {0,..,m}

inline int popcount(Idem x) { return __builtin_popcount(x); }

inline std::string idem_str(Idem x) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (x >> i & 1u) {
      if (!first) s += ',';
      s += std::to_string(i);
      first = false;
    }
  return s + "}";
}

// v_i(x) = #{a in x : a >= i}
inline int tail_count(Idem x, int i) { return popcount(x >> i); }

struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MinimalWeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContextMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotShiftable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A perfect matching of the places {1,..,m} (m even), each pair oriented
// (tail, head).  Orientations come from strand orientations of the diagram
// and fix the signs of the Alexander grading.
struct Matching {
  // pair index of place i (1-based places; slot 0 unused)
  std::vector<int> pairOf;
  std::vector<std::pair<int, int>> pairs;  // (tail, head) per pair

  Matching() = default;
  explicit Matching(std::vector<std::pair<int, int>> oriented) : pairs(std::move(oriented)) {
    int m = 0;
    for (auto& [t, h] : pairs) m = std::max({m, t, h});
    pairOf.assign(m + 1, -1);
    for (size_t p = 0; p < pairs.size(); ++p) {
      auto [t, h] = pairs[p];
      if (t < 1 || h < 1 || t == h || pairOf[t] != -1 || pairOf[h] != -1)
        throw RangeError("matching is not a partition into oriented pairs");
      pairOf[t] = pairOf[h] = (int)p;
    }
    for (int i = 1; i <= m; ++i)
      if (pairOf[i] < 0) throw RangeError("matching does not cover all places");
  }

  int places() const { return (int)pairOf.size() ? (int)pairOf.size() - 1 : 0; }
  int numPairs() const { return (int)pairs.size(); }
  bool matched(int i, int j) const {
    return i <= places() && j <= places() && i >= 1 && j >= 1 && pairOf[i] == pairOf[j];
  }
  bool isHead(int i) const { return pairs[pairOf[i]].second == i; }
  int partner(int i) const {
    auto [t, h] = pairs[pairOf[i]];
    return t == i ? h : t;
  }
};

enum class Flavor { B, C, Dual };

// Immutable description of one algebra: B(m,k), a C-restriction of it, or
// the dual algebra (B(m,k) with E-generators and differential dE_i = U_i).
// Shared by all elements and modules over the algebra; the vanishing
// predicate's kill vectors are cached lazily per idempotent pair.
struct AlgebraContext {
  int m = 0;  // number of places (strands); positions are {0,..,m}
  int k = 0;  // particles per idempotent state
  Flavor flavor = Flavor::B;
  int windowLo = 0, windowHi = 0;  // idempotent window for flavor C
  Matching matching;               // may be empty (no curvature / no Alexander pairs)
  int ell = 0;                     // number of link-variable pairs (w_t, z_t)

  AlgebraContext(int m_, int k_, Flavor f, Matching mt = {}, int ell_ = 0)
      : m(m_), k(k_), flavor(f), matching(std::move(mt)), ell(ell_) {
    if (f == Flavor::C) {
      windowLo = 1;
      windowHi = m - 1;
    } else {
      windowLo = 0;
      windowHi = m;
    }
    if (matching.places() != 0 && matching.places() != m)
      throw RangeError("matching size disagrees with place count");
  }

  static std::shared_ptr<const AlgebraContext> makeB(int m, int k, Matching mt = {}, int ell = 0) {
    return std::make_shared<const AlgebraContext>(m, k, Flavor::B, std::move(mt), ell);
  }
  // C(n) = I_{1<=*<=2n-1} B(2n,n) I_{1<=*<=2n-1}
  static std::shared_ptr<const AlgebraContext> makeC(int n, Matching mt = {}, int ell = 0) {
    return std::make_shared<const AlgebraContext>(2 * n, n, Flavor::C, std::move(mt), ell);
  }
  // nDuAlg(n,M): B(2n, n+1) with E_1,..,E_2n adjoined
  static std::shared_ptr<const AlgebraContext> makeDual(int n, Matching mt, int ell = 0) {
    return std::make_shared<const AlgebraContext>(2 * n, n + 1, Flavor::Dual, std::move(mt), ell);
  }

  bool idemValid(Idem x) const {
    if (popcount(x) != k) return false;
    if (x >> (m + 1)) return false;
    for (int i = 0; i <= m; ++i)
      if ((x >> i & 1u) && (i < windowLo || i > windowHi)) return false;
    return true;
  }

  void enumerateIdems(const std::function<void(Idem)>& fn) const {
    // iterate k-subsets of [windowLo, windowHi]
    int span = windowHi - windowLo + 1;
    if (k > span) return;
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      Idem x = 0;
      for (int p : pick) x |= 1u << (windowLo + p);
      fn(x);
      int i = k - 1;
      while (i >= 0 && pick[i] == span - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  // doubled minimal weight at place i between idempotent states x, y
  static int minWeight(Idem x, Idem y, int i) { return std::abs(tail_count(x, i) - tail_count(y, i)); }

  // Vanishing predicate: a valid triple (x,y,w) is zero in B(m,k) iff it
  // factors through U_i I_z = 0 for some place i and state z with
  // z & {i-1,i} empty.  Kill vectors are cached per (x,y) as an antichain.
  bool tripleIsZero(Idem x, Idem y, const std::vector<int>& w) const {
    const auto& kills = killVectors(x, y);
    for (const auto& kv : kills) {
      bool dominated = true;
      for (int i = 0; i < m; ++i)
        if (w[i] < kv[i]) {
          dominated = false;
          break;
        }
      if (dominated) return true;
    }
    return false;
  }

  const std::vector<std::vector<int>>& killVectors(Idem x, Idem y) const {
    uint64_t key = (uint64_t)x << 32 | y;
    {
      std::lock_guard<std::mutex> lk(cacheMutex_);
      auto it = killCache_.find(key);
      if (it != killCache_.end()) return it->second;
    }
    std::set<std::vector<int>> cand;
    // z ranges over all B(m,k) idempotent states (the window restriction of
    // flavor C does not change the ideal: C sits inside B).
    std::vector<int> pick(k);
    auto tryZ = [&](Idem z) {
      for (int i = 1; i <= m; ++i) {
        if (z & (3u << (i - 1))) continue;  // z must avoid positions {i-1, i}
        std::vector<int> kv(m);
        for (int t = 1; t <= m; ++t) kv[t - 1] = minWeight(x, z, t) + minWeight(z, y, t);
        kv[i - 1] += 2;
        cand.insert(std::move(kv));
      }
    };
    // enumerate k-subsets of {0..m}
    if (k <= m + 1 && k >= 0) {
      if (k == 0) {
        tryZ(0);
      } else {
        for (int i = 0; i < k; ++i) pick[i] = i;
        while (true) {
          Idem z = 0;
          for (int p : pick) z |= 1u << p;
          tryZ(z);
          int i = k - 1;
          while (i >= 0 && pick[i] == m + 1 - k + i) --i;
          if (i < 0) break;
          ++pick[i];
          for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
      }
    }
    // keep only the minimal elements of the dominance order
    std::vector<std::vector<int>> kills;
    for (auto& kv : cand) {
      bool dominated = false;
      for (auto& other : cand) {
        if (other == kv) continue;
        bool le = true, strict = false;
        for (int t = 0; t < m; ++t) {
          if (other[t] > kv[t]) {
            le = false;
            break;
          }
          if (other[t] < kv[t]) strict = true;
        }
        if (le && strict) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kills.push_back(kv);
    }
    std::lock_guard<std::mutex> lk(cacheMutex_);
    return killCache_.emplace(key, std::move(kills)).first->second;
  }

 private:
  mutable std::mutex cacheMutex_;
  mutable std::unordered_map<uint64_t, std::vector<std::vector<int>>> killCache_;
};

using Ctx = std::shared_ptr<const AlgebraContext>;

// One basis element: idempotents, doubled weights per place, link-variable
// exponents (w_1,z_1,...,w_ell,z_ell), and the E-set (dual algebras only).
struct Pure {
  Idem left = 0, right = 0;
  std::vector<int> w;          // doubled weights, length m
  std::vector<int> wz;         // exponents, length 2*ell (not doubled)
  std::vector<uint8_t> es;     // strictly increasing E indices

  auto operator<=>(const Pure&) const = default;

  int totalWeight2() const {
    int s = 0;
    for (int v : w) s += v;
    return s;
  }
  int totalWz() const {
    int s = 0;
    for (int v : wz) s += v;
    return s;
  }
  bool isIdempotent() const {
    return left == right && totalWeight2() == 0 && totalWz() == 0 && es.empty();
  }
};

// F2-linear combination of pure elements, kept sorted and duplicate-free.
struct Elt {
  std::vector<Pure> terms;

  Elt() = default;
  explicit Elt(Pure p) : terms{std::move(p)} {}

  bool zero() const { return terms.empty(); }
  void add(const Pure& p) {  // XOR one term
    auto it = std::lower_bound(terms.begin(), terms.end(), p);
    if (it != terms.end() && *it == p)
      terms.erase(it);
    else
      terms.insert(it, p);
  }
  void add(const Elt& o) {
    for (auto& p : o.terms) add(p);
  }
  friend Elt operator+(Elt a, const Elt& b) {
    a.add(b);
    return a;
  }
  auto operator<=>(const Elt&) const = default;
};

class Algebra {
 public:
  explicit Algebra(Ctx ctx) : ctx_(std::move(ctx)) {}
  const AlgebraContext& ctx() const { return *ctx_; }
  const Ctx& ctxPtr() const { return ctx_; }

  // ---- constructors of elements ----

  Elt zero() const { return Elt{}; }

  Elt idem(Idem x) const {
    if (!ctx_->idemValid(x)) throw RangeError("bad idempotent state " + idem_str(x));
    Pure p;
    p.left = p.right = x;
    p.w.assign(ctx_->m, 0);
    p.wz.assign(2 * ctx_->ell, 0);
    return Elt(p);
  }

  // Normalized element, or Zero if the vanishing predicate kills it.
  // Throws if the weights are below minimum or parity-incompatible.
  Elt makePure(Idem x, Idem y, std::vector<int> w2, std::vector<int> wz = {},
               std::vector<uint8_t> es = {}) const {
    if (!ctx_->idemValid(x) || !ctx_->idemValid(y))
      throw RangeError("bad idempotent state");
    if ((int)w2.size() != ctx_->m) throw RangeError("weight vector length != m");
    for (int i = 1; i <= ctx_->m; ++i) {
      int mn = AlgebraContext::minWeight(x, y, i);
      if (w2[i - 1] < mn) throw MinimalWeightError("weight below minimum at place " + std::to_string(i));
      if ((w2[i - 1] - mn) % 2) throw MinimalWeightError("weight parity mismatch at place " + std::to_string(i));
    }
    if (wz.empty()) wz.assign(2 * ctx_->ell, 0);
    if ((int)wz.size() != 2 * ctx_->ell) throw RangeError("link-exponent length != 2*ell");
    if (!es.empty() && ctx_->flavor != Flavor::Dual) throw ContextMismatch("E-generators outside a dual algebra");
    for (size_t i = 0; i + 1 < es.size(); ++i)
      if (es[i] >= es[i + 1]) throw RangeError("E-set not strictly increasing");
    for (uint8_t e : es)
      if (e < 1 || e > ctx_->m) throw RangeError("E index out of range");
    if (ctx_->tripleIsZero(x, y, w2)) return Elt{};
    Pure p;
    p.left = x;
    p.right = y;
    p.w = std::move(w2);
    p.wz = std::move(wz);
    p.es = std::move(es);
    return Elt(p);
  }

  // generators; i is a place in {1,..,m}
  Elt L(int i, Idem x) const {  // moves a particle from position i to i-1
    if ((x >> i & 1u) == 0 || (x >> (i - 1) & 1u)) return Elt{};
    Idem y = (x & ~(1u << i)) | 1u << (i - 1);
    if (!ctx_->idemValid(y)) return Elt{};
    std::vector<int> w(ctx_->m, 0);
    w[i - 1] = 1;
    return makePure(x, y, std::move(w));
  }
  Elt R(int i, Idem x) const {  // moves a particle from position i-1 to i
    if ((x >> (i - 1) & 1u) == 0 || (x >> i & 1u)) return Elt{};
    Idem y = (x & ~(1u << (i - 1))) | 1u << i;
    if (!ctx_->idemValid(y)) return Elt{};
    std::vector<int> w(ctx_->m, 0);
    w[i - 1] = 1;
    return makePure(x, y, std::move(w));
  }
  Elt U(int i, Idem x, int pow = 1) const {
    std::vector<int> w(ctx_->m, 0);
    w[i - 1] = 2 * pow;
    return makePure(x, x, std::move(w));
  }
  Elt E(int i, Idem x) const {
    if (ctx_->flavor != Flavor::Dual) throw ContextMismatch("E-generator outside dual algebra");
    std::vector<int> w(ctx_->m, 0);
    return makePure(x, x, std::move(w), {}, {(uint8_t)i});
  }
  Elt linkVar(int slot, Idem x, int pow = 1) const {  // slot in {0,..,2*ell-1}: w_1,z_1,...
    std::vector<int> wz(2 * ctx_->ell, 0);
    wz[slot] = pow;
    return makePure(x, x, std::vector<int>(ctx_->m, 0), std::move(wz));
  }

  // ---- multiplication ----

  Elt mul(const Pure& a, const Pure& b) const {
    if (a.right != b.left) return Elt{};
    Idem x = a.left, y = b.right;
    std::vector<int> w(ctx_->m);
    for (int i = 0; i < ctx_->m; ++i) w[i] = a.w[i] + b.w[i];
    if (ctx_->tripleIsZero(x, y, w)) return Elt{};
    std::vector<int> wz(a.wz.size());
    for (size_t i = 0; i < wz.size(); ++i) wz[i] = a.wz[i] + b.wz[i];
    Elt out;
    // normalize the concatenated E-word; each summand keeps the same triple
    std::vector<std::vector<uint8_t>> words = normalizeEWord(a.es, b.es);
    for (auto& es : words) {
      Pure p;
      p.left = x;
      p.right = y;
      p.w = w;
      p.wz = wz;
      p.es = std::move(es);
      out.add(p);
    }
    return out;
  }

  Elt mul(const Elt& a, const Elt& b) const {
    Elt out;
    for (auto& p : a.terms)
      for (auto& q : b.terms) out.add(mul(p, q));
    return out;
  }

  // ---- differential (dual algebras): Leibniz extension of dE_i = U_i ----

  Elt differential(const Pure& a) const {
    if (ctx_->flavor != Flavor::Dual) throw ContextMismatch("differential requires the dual algebra");
    Elt out;
    for (size_t j = 0; j < a.es.size(); ++j) {
      // the sign-free Leibniz rule over F2: replace E_{i_j} by U_{i_j},
      // then restore the remaining word to normal form.  Since removing one
      // letter from a strictly increasing word keeps it increasing, no
      // further rewriting is needed.
      Pure p = a;
      int place = a.es[j];
      p.es.erase(p.es.begin() + j);
      p.w[place - 1] += 2;
      if (!ctx_->tripleIsZero(p.left, p.right, p.w)) out.add(p);
    }
    return out;
  }

  Elt differential(const Elt& a) const {
    Elt out;
    for (auto& p : a.terms) out.add(differential(p));
    return out;
  }

  // ---- curvature mu_0 = sum_{{i,j} in M} U_i U_j, restricted to idempotent x

  Elt curvatureAt(Idem x) const {
    Elt out;
    for (auto& [t, h] : ctx_->matching.pairs) {
      std::vector<int> w(ctx_->m, 0);
      w[t - 1] = 2;
      w[h - 1] = 2;
      if (!ctx_->tripleIsZero(x, x, w)) {
        Pure p;
        p.left = p.right = x;
        p.w = std::move(w);
        p.wz.assign(2 * ctx_->ell, 0);
        out.add(p);
      }
    }
    return out;
  }

  // ---- gradings ----

  // doubled Delta grading: -(sum of weights) - (w,z exponents); E's weightless
  int delta2(const Pure& a) const { return -a.totalWeight2() - 2 * a.totalWz(); }

  // doubled Alexander vector, indexed by matching pairs then closed components;
  // pair slot value = weight_tail - weight_head; w_t lowers slot (pairs+t) by 1,
  // z_t raises it; E_i contributes like U_i.
  std::vector<int> alexander2(const Pure& a) const {
    const auto& M = ctx_->matching;
    std::vector<int> out(M.numPairs() + ctx_->ell, 0);
    for (int p = 0; p < M.numPairs(); ++p) {
      auto [t, h] = M.pairs[p];
      out[p] = a.w[t - 1] - a.w[h - 1];
    }
    for (uint8_t e : a.es) {
      int p = M.pairOf[e];
      out[p] += M.isHead(e) ? -2 : 2;
    }
    for (int t = 0; t < ctx_->ell; ++t)
      out[M.numPairs() + t] += 2 * (a.wz[2 * t + 1] - a.wz[2 * t]);
    return out;
  }

  // ---- index shifts across a marked minimum ----

  // psi on preferred idempotent states of B(n+1): contains 0 iff
  // |x & {0,1,2}| = 2; for i > 0, i in psi(x) iff i+2 in x.
  static bool preferred(Idem x) {
    int c = popcount(x & 7u);
    return (c == 1 || c == 2) && (x & 7u) != 3u;  // exclude the {0,1} pattern
  }
  static Idem psiIdem(Idem x) {
    Idem out = x >> 3 << 1;
    if (popcount(x & 7u) == 2) out |= 1u;
    return out;
  }

  // Psi(b): drop two places.  Requires weight_1 = weight_2 = 0 and both
  // idempotents preferred; the result lives in the algebra one index down.
  static Pure psiShift(const Pure& b) {
    if (b.w.size() < 2 || b.w[0] != 0 || b.w[1] != 0)
      throw NotShiftable("Psi needs weight_1 = weight_2 = 0");
    if (!preferred(b.left) || !preferred(b.right)) throw NotShiftable("Psi needs preferred idempotents");
    Pure out;
    out.left = psiIdem(b.left);
    out.right = psiIdem(b.right);
    out.w.assign(b.w.begin() + 2, b.w.end());
    out.wz = b.wz;
    return out;
  }

  static bool psiApplicable(const Pure& b) {
    return b.w.size() >= 2 && b.w[0] == 0 && b.w[1] == 0 && preferred(b.left) && preferred(b.right) &&
           b.es.empty();
  }

  // phi on preferred idempotent states of B(2n+2, n+2) (the dual side):
  // same formula as psi but without the {0,1} exclusion.
  static bool dualPreferred(Idem x) {
    int c = popcount(x & 7u);
    return c == 1 || c == 2;
  }

  // Phi(b): raise two places.  The new local weights at places 1,2 are the
  // (equal) minimal ones for the given target idempotents; E-indices shift
  // up by two.
  static Pure phiShift(const Pure& b, Idem newLeft, Idem newRight) {
    Pure out;
    out.left = newLeft;
    out.right = newRight;
    out.w.assign(b.w.size() + 2, 0);
    int mn1 = AlgebraContext::minWeight(newLeft, newRight, 1);
    int mn2 = AlgebraContext::minWeight(newLeft, newRight, 2);
    if (mn1 != mn2) throw NotShiftable("Phi: unequal minimal local weights");
    out.w[0] = out.w[1] = mn1;
    for (size_t i = 0; i < b.w.size(); ++i) out.w[i + 2] = b.w[i];
    out.wz = b.wz;
    out.es.reserve(b.es.size());
    for (uint8_t e : b.es) out.es.push_back((uint8_t)(e + 2));
    return out;
  }

 private:
  // Normal form of a concatenation of two increasing E-words: sort with
  // E_i E_j = E_j E_i + [matched] and E_i^2 = 0.  Returns the list of
  // resulting E-sets (an F2 sum).
  std::vector<std::vector<uint8_t>> normalizeEWord(const std::vector<uint8_t>& a,
                                                   const std::vector<uint8_t>& b) const {
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> word;
    word.reserve(a.size() + b.size());
    word.insert(word.end(), a.begin(), a.end());
    word.insert(word.end(), b.begin(), b.end());
    normalizeRec(std::move(word), out);
    // cancel duplicate summands over F2
    std::sort(out.begin(), out.end());
    std::vector<std::vector<uint8_t>> dedup;
    for (size_t i = 0; i < out.size();) {
      size_t j = i;
      while (j < out.size() && out[j] == out[i]) ++j;
      if ((j - i) % 2) dedup.push_back(out[i]);
      i = j;
    }
    return dedup;
  }

  void normalizeRec(std::vector<uint8_t> word, std::vector<std::vector<uint8_t>>& out) const {
    for (size_t i = 0; i + 1 < word.size(); ++i) {
      if (word[i] == word[i + 1]) return;  // E_i^2 = 0
      if (word[i] > word[i + 1]) {
        // swap, and branch with the pair removed when matched
        if (ctx_->matching.matched(word[i], word[i + 1])) {
          std::vector<uint8_t> rest;
          rest.reserve(word.size() - 2);
          rest.insert(rest.end(), word.begin(), word.begin() + i);
          rest.insert(rest.end(), word.begin() + i + 2, word.end());
          normalizeRec(std::move(rest), out);
        }
        std::swap(word[i], word[i + 1]);
        normalizeRec(std::move(word), out);
        return;
      }
    }
    out.push_back(std::move(word));
  }

  Ctx ctx_;
};

}  // namespace hfl
