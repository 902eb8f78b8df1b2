// DA bimodules of a marked minimum (blocked and unblocked flavors, plus the
// idempotent-restricted variants), the canonical DD bimodule, the dual-side
// marked-minimum bimodule, and the duality verification tying them together.
//
// The marked minimum joins strands 1 and 2; the input algebra sees 2n+2
// strands, the output 2n.  Local data lives at positions {0,1,2} and places
// {1,2}; everything else is transported by the index shift Psi.

#pragma once

#include "hfl/structures.hpp"

namespace hfl {

// summand labels
enum MMType : int { MM_X0 = 0, MM_X1 = 1, MM_X2 = 2, MM_Y0 = 3, MM_Y1 = 4, MM_Y2 = 5 };

inline const char* mmName(int t) {
  static const char* names[6] = {"X0", "X1", "X2", "Y0", "Y1", "Y2"};
  return names[t];
}

// X_i and Y_i are spanned by the preferred idempotents whose local pattern
// has minimum i; equivalently, the idempotents complementary to the primed
// summand table of the dual module.
inline int mmSummandIndex(Idem x) {  // -1 if not preferred
  if (!Algebra::preferred(x)) return -1;
  Idem loc = x & 7u;
  if (loc & 1u) return 0;
  if (loc & 2u) return 1;
  return 2;
}

namespace mmdetail {

enum Move : int { MV_NONE = 0, MV_L1, MV_R1, MV_L2, MV_R2 };

struct Slot {
  Move move = MV_NONE;
  int uPlace = 0;    // 0 = none, else 1 or 2
  int param = -1;    // -1 = fixed exponent, 0 = "k", 1 = "l"
  int expOffset = 0; // exponent = param + offset (or exactly offset if fixed)
  int minParam = 0;
};

struct Arrow {
  int src, tgt;
  int arity;  // number of algebra inputs (0, 1 or 2)
  Slot slots[2];
  bool wUsesK = false;
  int wOffset = 0;
  bool zUsesL = false;
  int zOffset = 0;
};

// local pattern transition of a move, as bit masks over positions {0,1,2}
inline bool applyMove(Move mv, Idem locIn, Idem& locOut) {
  switch (mv) {
    case MV_NONE:
      locOut = locIn;
      return true;
    case MV_L1:
      if (!(locIn & 2u) || (locIn & 1u)) return false;
      locOut = (locIn & ~2u) | 1u;
      return true;
    case MV_R1:
      if (!(locIn & 1u) || (locIn & 2u)) return false;
      locOut = (locIn & ~1u) | 2u;
      return true;
    case MV_L2:
      if (!(locIn & 4u) || (locIn & 2u)) return false;
      locOut = (locIn & ~4u) | 2u;
      return true;
    case MV_R2:
      if (!(locIn & 2u) || (locIn & 4u)) return false;
      locOut = (locIn & ~2u) | 4u;
      return true;
  }
  return false;
}

inline int moveWeight1(Move mv) { return (mv == MV_L1 || mv == MV_R1) ? 1 : 0; }
inline int moveWeight2(Move mv) { return (mv == MV_L2 || mv == MV_R2) ? 1 : 0; }

// The unblocked action table of the marked minimum (k, l range over
// non-negative integers; parameters appearing in the output monomial).
inline const std::vector<Arrow>& unblockedTable() {
  static const std::vector<Arrow> table = [] {
    std::vector<Arrow> t;
    auto slot = [](Move mv, int place, int param, int off, int minP = 0) {
      Slot s;
      s.move = mv;
      s.uPlace = place;
      s.param = param;
      s.expOffset = off;
      s.minParam = minP;
      return s;
    };
    auto add1 = [&](int src, int tgt, Slot s, bool wK, int wOff, bool zL, int zOff) {
      Arrow a;
      a.src = src;
      a.tgt = tgt;
      a.arity = 1;
      a.slots[0] = s;
      a.wUsesK = wK;
      a.wOffset = wOff;
      a.zUsesL = zL;
      a.zOffset = zOff;
      t.push_back(a);
    };
    auto add2 = [&](int src, int tgt, Slot s0, Slot s1, bool wK, int wOff, bool zL, int zOff) {
      Arrow a;
      a.src = src;
      a.tgt = tgt;
      a.arity = 2;
      a.slots[0] = s0;
      a.slots[1] = s1;
      a.wUsesK = wK;
      a.wOffset = wOff;
      a.zUsesL = zL;
      a.zOffset = zOff;
      t.push_back(a);
    };
    auto add0 = [&](int src, int tgt, int wOff, int zOff) {
      Arrow a;
      a.src = src;
      a.tgt = tgt;
      a.arity = 0;
      a.wOffset = wOff;
      a.zOffset = zOff;
      t.push_back(a);
    };
    // z^l (x) R2 U2^l : X1 -> X2       and the companion arrows of the figure
    add1(MM_X1, MM_X2, slot(MV_R2, 2, 1, 0), false, 0, true, 0);
    add1(MM_X2, MM_X1, slot(MV_L2, 2, 1, 0), false, 0, true, 1);
    add1(MM_X1, MM_X0, slot(MV_L1, 1, 0, 0), true, 0, false, 0);
    add1(MM_X0, MM_X1, slot(MV_R1, 1, 0, 0), true, 1, false, 0);
    add2(MM_X1, MM_Y1, slot(MV_NONE, 1, 0, 1), slot(MV_NONE, 2, 1, 1), true, 0, true, 0);
    add2(MM_X1, MM_Y1, slot(MV_NONE, 2, 1, 1), slot(MV_NONE, 1, 0, 1), true, 0, true, 0);
    add0(MM_Y1, MM_X1, 1, 1);  // wz
    add2(MM_X0, MM_Y2, slot(MV_R1, 1, 0, 0), slot(MV_R2, 2, 1, 0), true, 0, true, 0);
    add1(MM_Y2, MM_Y1, slot(MV_L2, 2, 1, 0), false, 0, true, 0);
    add1(MM_Y1, MM_Y2, slot(MV_R2, 2, 1, 0), false, 0, true, 1);
    add2(MM_X2, MM_Y0, slot(MV_L2, 2, 1, 0), slot(MV_L1, 1, 0, 0), true, 0, true, 0);
    add1(MM_Y0, MM_Y1, slot(MV_R1, 1, 0, 0), true, 0, false, 0);
    add1(MM_Y1, MM_Y0, slot(MV_L1, 1, 0, 0), true, 1, false, 0);
    add2(MM_X1, MM_Y0, slot(MV_NONE, 2, 1, 1), slot(MV_L1, 1, 0, 0), true, 0, true, 0);
    add2(MM_X1, MM_Y2, slot(MV_NONE, 1, 0, 1), slot(MV_R2, 2, 1, 0), true, 0, true, 0);
    add2(MM_X2, MM_Y1, slot(MV_L2, 2, 1, 0), slot(MV_NONE, 1, 0, 1), true, 0, true, 0);
    add2(MM_X0, MM_Y1, slot(MV_R1, 1, 0, 0), slot(MV_NONE, 2, 1, 1), true, 0, true, 0);
    add0(MM_Y2, MM_X2, 1, 0);  // w
    add0(MM_Y0, MM_X0, 0, 1);  // z
    // self-loops
    for (int g : {MM_X1, MM_Y1}) {
      add1(g, g, slot(MV_NONE, 1, 0, 0, 1), true, 0, false, 0);   // w^k (x) U1^k, k >= 1
      add1(g, g, slot(MV_NONE, 2, 1, 1), false, 0, true, 1);      // z^{l+1} (x) U2^{l+1}
    }
    for (int g : {MM_X0, MM_Y0}) add1(g, g, slot(MV_NONE, 1, 0, 0, 1), true, 0, false, 0);
    for (int g : {MM_X2, MM_Y2}) add1(g, g, slot(MV_NONE, 2, 1, 0, 1), false, 0, true, 0);
    return t;
  }();
  return table;
}

// The blocked (hat) action table, transcribed independently from its own
// figure: eleven arrows, no w/z outputs, no self-loops.
inline const std::vector<Arrow>& hatTable() {
  static const std::vector<Arrow> table = [] {
    std::vector<Arrow> t;
    auto fixed = [](Move mv, int place, int exp) {
      Slot s;
      s.move = mv;
      s.uPlace = place;
      s.param = -1;
      s.expOffset = exp;
      return s;
    };
    auto add1 = [&](int src, int tgt, Slot s) {
      Arrow a;
      a.src = src;
      a.tgt = tgt;
      a.arity = 1;
      a.slots[0] = s;
      t.push_back(a);
    };
    auto add2 = [&](int src, int tgt, Slot s0, Slot s1) {
      Arrow a;
      a.src = src;
      a.tgt = tgt;
      a.arity = 2;
      a.slots[0] = s0;
      a.slots[1] = s1;
      t.push_back(a);
    };
    add2(MM_X1, MM_Y1, fixed(MV_NONE, 1, 1), fixed(MV_NONE, 2, 1));  // (U1,U2)
    add2(MM_X1, MM_Y1, fixed(MV_NONE, 2, 1), fixed(MV_NONE, 1, 1));  // (U2,U1)
    add1(MM_X1, MM_X2, fixed(MV_R2, 2, 0));
    add1(MM_X1, MM_X0, fixed(MV_L1, 1, 0));
    add2(MM_X0, MM_Y2, fixed(MV_R1, 1, 0), fixed(MV_R2, 2, 0));
    add1(MM_Y2, MM_Y1, fixed(MV_L2, 2, 0));
    add2(MM_X2, MM_Y0, fixed(MV_L2, 2, 0), fixed(MV_L1, 1, 0));
    add1(MM_Y0, MM_Y1, fixed(MV_R1, 1, 0));
    add2(MM_X1, MM_Y0, fixed(MV_NONE, 2, 1), fixed(MV_L1, 1, 0));
    add2(MM_X1, MM_Y2, fixed(MV_NONE, 1, 1), fixed(MV_R2, 2, 0));
    add2(MM_X2, MM_Y1, fixed(MV_L2, 2, 0), fixed(MV_NONE, 1, 1));
    add2(MM_X0, MM_Y1, fixed(MV_R1, 1, 0), fixed(MV_NONE, 2, 1));
    return t;
  }();
  return table;
}

}  // namespace mmdetail

// Relative gradings of the six summands (doubled), with the Alexander value
// landing in the newly closed component's slot.
inline int mmDelta2(int t) {
  static const int d[6] = {0, 1, 0, 0, -1, 0};
  return d[t];
}
inline int mmAlex2(int t) {
  static const int a[6] = {-1, 0, 1, 1, 0, -1};
  return a[t];
}

class MarkedMin : public DABimodule {
 public:
  // n: output index (output algebra B(2n, n)); matchOut: matching on the
  // output strands; ellIn: link-variable pairs already present.  The input
  // matching pairs {1,2} and shifts matchOut up by two.
  MarkedMin(int n, Matching matchOut, int ellIn, bool unblocked, bool restricted)
      : n_(n), unblocked_(unblocked), restricted_(restricted) {
    std::vector<std::pair<int, int>> inPairs;
    inPairs.push_back({2, 1});  // local pair, oriented tail 2 -> head 1
    for (auto [t, h] : matchOut.pairs) inPairs.push_back({t + 2, h + 2});
    Matching matchIn(inPairs);
    out_ = AlgebraContext::makeB(2 * n, n, matchOut, ellIn + 1);
    in_ = restricted ? AlgebraContext::makeC(n + 1, matchIn, ellIn)
                     : AlgebraContext::makeB(2 * n + 2, n + 1, matchIn, ellIn);
    // generators: (summand, preferred right idempotent)
    in_->enumerateIdems([&](Idem x) {
      int s = mmSummandIndex(x);
      if (s < 0) return;
      for (int xy = 0; xy < 2; ++xy) {
        int type = xy == 0 ? s : s + 3;
        DAGen g;
        g.outIdem = Algebra::psiIdem(x);
        g.inIdem = x;
        g.delta2 = mmDelta2(type);
        g.alex2.assign(out_->matching.numPairs() + out_->ell, 0);
        g.alex2.back() = mmAlex2(type);
        g.name = std::string(mmName(type)) + idem_str(x);
        gens_.push_back(std::move(g));
        types_.push_back(type);
      }
    });
    for (int i = 0; i < (int)gens_.size(); ++i) index_[{types_[i], gens_[i].inIdem}] = i;
  }

  const Ctx& outCtx() const override { return out_; }
  const Ctx& inCtx() const override { return in_; }
  int numGens() const override { return (int)gens_.size(); }
  const DAGen& gen(int i) const override { return gens_[i]; }
  int maxArity() const override { return 2; }
  int typeOf(int i) const { return types_[i]; }

  int genIndex(int type, Idem rightIdem) const {
    auto it = index_.find({type, rightIdem});
    return it == index_.end() ? -1 : it->second;
  }

  // in-slot -> out-slot: the local pair closes into the new component;
  // remaining pairs shift down; closed components keep their slots.
  std::vector<int> alexMap() const override {
    int npIn = in_->matching.numPairs();
    int npOut = out_->matching.numPairs();
    std::vector<int> map(npIn + in_->ell);
    map[0] = npOut + out_->ell - 1;  // the new closed component
    for (int p = 1; p < npIn; ++p) map[p] = p - 1;
    for (int t = 0; t < in_->ell; ++t) map[npIn + t] = npOut + t;
    return map;
  }

  std::vector<DATerm> delta(int g, std::span<const Pure> inputs) const override {
    std::vector<DATerm> out;
    const auto& table = unblocked_ ? mmdetail::unblockedTable() : mmdetail::hatTable();
    int type = types_[g];
    Idem x = gens_[g].inIdem;
    Algebra outAlg(out_);

    if (inputs.size() == 1 && isTransport(inputs[0])) {
      // d^1_2(X, b) = Psi(b) (x) X for locally trivial b
      Pure shifted = shiftRemote(inputs[0]);
      if (!out_->tripleIsZero(shifted.left, shifted.right, shifted.w)) {
        int tgt = genIndex(type, inputs[0].right);
        if (tgt >= 0) out.push_back({shifted, tgt});
      }
    }

    for (const auto& row : table) {
      if (row.src != type || row.arity != (int)inputs.size()) continue;
      int kParam = -1, lParam = -1;
      bool ok = true;
      Idem loc = x & 7u;
      for (int s = 0; s < row.arity && ok; ++s) {
        const auto& slot = row.slots[s];
        const Pure& a = inputs[s];
        if ((a.left & 7u) != loc) {
          ok = false;
          break;
        }
        Idem locNext;
        if (!mmdetail::applyMove(slot.move, loc, locNext)) {
          ok = false;
          break;
        }
        if ((a.right & 7u) != locNext) {
          ok = false;
          break;
        }
        int w1 = a.w[0], w2 = a.w[1];
        int exp;  // U-exponent carried by this slot
        int base1 = mmdetail::moveWeight1(slot.move), base2 = mmdetail::moveWeight2(slot.move);
        if (slot.uPlace == 1) {
          if (w2 != base2 || w1 < base1 || (w1 - base1) % 2) {
            ok = false;
            break;
          }
          exp = (w1 - base1) / 2;
        } else if (slot.uPlace == 2) {
          if (w1 != base1 || w2 < base2 || (w2 - base2) % 2) {
            ok = false;
            break;
          }
          exp = (w2 - base2) / 2;
        } else {
          if (w1 != base1 || w2 != base2) {
            ok = false;
            break;
          }
          exp = 0;
        }
        if (slot.param == -1) {
          if (exp != slot.expOffset) ok = false;
        } else {
          int p = exp - slot.expOffset;
          if (p < slot.minParam) ok = false;
          else if (slot.param == 0)
            kParam = p;
          else
            lParam = p;
        }
        loc = locNext;
      }
      if (!ok) continue;
      // assemble output: product of shifted remote factors, times w^a z^b
      Elt coeff = outAlg.idem(Algebra::psiIdem(x));
      Idem target = x;
      for (int s = 0; s < row.arity; ++s) {
        coeff = outAlg.mul(coeff, Elt(shiftRemote(inputs[s])));
        target = inputs[s].right;
      }
      if (coeff.zero()) continue;
      int wExp = row.wOffset + (row.wUsesK ? std::max(kParam, 0) : 0);
      int zExp = row.zOffset + (row.zUsesL ? std::max(lParam, 0) : 0);
      int tgt = genIndex(row.tgt, target);
      if (tgt < 0) continue;
      for (Pure p : coeff.terms) {
        p.wz[2 * in_->ell + 0] += wExp;
        p.wz[2 * in_->ell + 1] += zExp;
        out.push_back({p, tgt});
      }
    }
    return out;
  }

 private:
  bool isTransport(const Pure& a) const {
    return a.w[0] == 0 && a.w[1] == 0 && a.es.empty();
  }

  // Psi on the remote part: drop places 1,2, shift positions down by two,
  // extend the link-exponent vector by the new (w,z) pair.
  Pure shiftRemote(const Pure& a) const {
    Pure p;
    p.left = Algebra::psiIdem(a.left);
    p.right = Algebra::psiIdem(a.right);
    p.w.assign(a.w.begin() + 2, a.w.end());
    p.wz = a.wz;
    p.wz.resize(2 * (in_->ell + 1), 0);
    return p;
  }

  int n_;
  bool unblocked_, restricted_;
  Ctx out_, in_;
  std::vector<DAGen> gens_;
  std::vector<int> types_;
  std::map<std::pair<int, Idem>, int> index_;
};

inline std::shared_ptr<MarkedMin> marked_min(int n, Matching matchOut = {}, int ellIn = 0) {
  return std::make_shared<MarkedMin>(n, std::move(matchOut), ellIn, true, false);
}
inline std::shared_ptr<MarkedMin> marked_min_hat(int n, Matching matchOut = {}, int ellIn = 0) {
  return std::make_shared<MarkedMin>(n, std::move(matchOut), ellIn, false, false);
}
inline std::shared_ptr<MarkedMin> marked_min_restricted(int n, Matching matchOut = {}, int ellIn = 0,
                                                        bool unblocked = true) {
  return std::make_shared<MarkedMin>(n, std::move(matchOut), ellIn, unblocked, true);
}

// ---------------------------------------------------------------------------
// The canonical DD bimodule over (B(2n,n), nDuAlg(n,M)): one generator per
// n-element subset of {0..2n}, delta^1(v) = A (x) v with
// A = sum (L_i (x) R_i + R_i (x) L_i) + sum U_i (x) E_i.

inline TypeDD canon_dd(int n, const Matching& M) {
  auto bctx = AlgebraContext::makeB(2 * n, n, M);
  auto dctx = AlgebraContext::makeDual(n, M);
  TypeDD K(bctx, dctx);
  Algebra B(bctx), D(dctx);
  Idem full = (1u << (2 * n + 1)) - 1;
  std::vector<Idem> xs;
  bctx->enumerateIdems([&](Idem x) { xs.push_back(x); });
  std::map<Idem, int> idx;
  for (Idem x : xs) {
    DDGen g;
    g.idem1 = x;
    g.idem2 = full & ~x;
    g.delta2 = 0;
    g.name = "v" + idem_str(x);
    idx[x] = K.addGen(std::move(g));
  }
  for (Idem x : xs) {
    Idem c = full & ~x;
    for (int i = 1; i <= 2 * n; ++i) {
      Elt l = B.L(i, x), r = D.R(i, c);
      if (!l.zero() && !r.zero()) {
        Idem y = l.terms[0].right;
        if (idx.count(y) && r.terms[0].right == (full & ~y))
          K.addArrow(idx[x], idx[y], DDCoeff{l.terms[0], r.terms[0]});
      }
      Elt rr = B.R(i, x), ll = D.L(i, c);
      if (!rr.zero() && !ll.zero()) {
        Idem y = rr.terms[0].right;
        if (idx.count(y) && ll.terms[0].right == (full & ~y))
          K.addArrow(idx[x], idx[y], DDCoeff{rr.terms[0], ll.terms[0]});
      }
      Elt u = B.U(i, x), e = D.E(i, c);
      if (!u.zero() && !e.zero()) K.addArrow(idx[x], idx[x], DDCoeff{u.terms[0], e.terms[0]});
    }
  }
  return K;
}

// ---------------------------------------------------------------------------
// The dual-side marked minimum over (nDuAlg(n+1,M1)[w,z], nDuAlg(n,M2)).

namespace mmdetail {

// primed summand local patterns (masks over positions {0,1,2})
inline const std::vector<Idem>& primedPatterns(int type) {
  static const std::vector<Idem> pat[6] = {
      {6u, 2u},  // X'0: {1,2}, {1}
      {5u, 1u},  // X'1: {0,2}, {0}
      {3u},      // X'2: {0,1}
      {6u, 2u},  // Y'0
      {5u, 1u},  // Y'1
      {3u},      // Y'2
  };
  return pat[type];
}

inline int primedType(Idem x, bool yside) {
  Idem loc = x & 7u;
  int base;
  if (loc == 6u || loc == 2u) base = 0;
  else if (loc == 5u || loc == 1u) base = 1;
  else if (loc == 3u) base = 2;
  else return -1;
  return base + (yside ? 3 : 0);
}

}  // namespace mmdetail

inline int nmmDelta2(int t) {
  static const int d[6] = {-1, 0, -1, -1, -2, -1};
  return d[t];
}

class NMarkedMin : public DABimodule {
 public:
  NMarkedMin(int n, Matching matchOutLess) : n_(n) {
    std::vector<std::pair<int, int>> inPairs;
    inPairs.push_back({2, 1});
    for (auto [t, h] : matchOutLess.pairs) inPairs.push_back({t + 2, h + 2});
    Matching m1(inPairs);
    out_ = AlgebraContext::makeDual(n + 1, m1, 1);
    in_ = AlgebraContext::makeDual(n, matchOutLess, 0);
    out_->enumerateIdems([&](Idem x) {
      for (int yside = 0; yside < 2; ++yside) {
        int t = mmdetail::primedType(x, yside);
        if (t < 0) continue;
        DAGen g;
        g.outIdem = x;
        g.inIdem = phiIdem(x);
        g.delta2 = nmmDelta2(t);
        g.alex2.assign(out_->matching.numPairs() + out_->ell, 0);
        g.name = std::string(mmName(t)) + "'" + idem_str(x);
        gens_.push_back(std::move(g));
        types_.push_back(t);
        index_[{t, x}] = (int)gens_.size() - 1;
      }
    });
  }

  static Idem phiIdem(Idem x) {
    Idem out = x >> 3 << 1;
    if (popcount(x & 7u) == 2) out |= 1u;
    return out;
  }

  const Ctx& outCtx() const override { return out_; }
  const Ctx& inCtx() const override { return in_; }
  int numGens() const override { return (int)gens_.size(); }
  const DAGen& gen(int i) const override { return gens_[i]; }
  int maxArity() const override { return 1; }
  int typeOf(int i) const { return types_[i]; }
  std::vector<int> alexMap() const override {
    // gradings are not tracked on the dual side
    return std::vector<int>(in_->matching.numPairs() + in_->ell, -1);
  }

  int genIndex(int type, Idem outIdem) const {
    auto it = index_.find({type, outIdem});
    return it == index_.end() ? -1 : it->second;
  }

  std::vector<DATerm> delta(int g, std::span<const Pure> inputs) const override {
    std::vector<DATerm> out;
    int type = types_[g];
    Idem x = gens_[g].outIdem;
    Algebra A(out_);
    if (inputs.empty()) {
      // delta^1_1 per the figure; outputs are words in nDuAlg(n+1)[w,z]
      auto emit = [&](int tgtType, const Elt& word, int wExp, int zExp) {
        for (Pure p : word.terms) {
          int tgt = genIndex(tgtType, p.right);
          if (tgt < 0) continue;
          p.wz[0] += wExp;
          p.wz[1] += zExp;
          out.push_back({p, tgt});
        }
      };
      auto L = [&](int i, const Elt& e) {
        Elt r;
        for (auto& p : e.terms) r.add(A.mul(Elt(p), A.L(i, p.right)));
        return r;
      };
      auto R = [&](int i, const Elt& e) {
        Elt r;
        for (auto& p : e.terms) r.add(A.mul(Elt(p), A.R(i, p.right)));
        return r;
      };
      auto E = [&](int i, const Elt& e) {
        Elt r;
        for (auto& p : e.terms) r.add(A.mul(Elt(p), A.E(i, p.right)));
        return r;
      };
      Elt one = A.idem(x);
      switch (type) {
        case MM_X1:
          emit(MM_X2, L(2, one), 0, 0);
          emit(MM_X0, R(1, one), 0, 0);
          emit(MM_Y1, one, 0, 0);  // m_1
          emit(MM_Y0, R(1, E(2, one)), 0, 0);
          emit(MM_Y2, L(2, E(1, one)), 0, 0);
          emit(MM_X1, E(1, one), 1, 0);
          emit(MM_X1, E(2, one), 0, 1);
          break;
        case MM_X2:
          emit(MM_X1, R(2, one), 0, 1);
          emit(MM_Y0, R(1, R(2, one)), 0, 0);
          emit(MM_Y1, E(1, R(2, one)), 0, 0);
          emit(MM_X2, E(2, one), 0, 1);
          break;
        case MM_X0:
          emit(MM_X1, L(1, one), 1, 0);
          emit(MM_Y2, L(2, L(1, one)), 0, 0);
          emit(MM_Y1, E(2, L(1, one)), 0, 0);
          emit(MM_X0, E(1, one), 1, 0);
          break;
        case MM_Y1:
          emit(MM_X1, one, 1, 1);  // wz
          emit(MM_Y2, L(2, one), 0, 1);
          emit(MM_Y0, R(1, one), 1, 0);
          emit(MM_Y1, E(1, one), 1, 0);
          emit(MM_Y1, E(2, one), 0, 1);
          break;
        case MM_Y2:
          emit(MM_Y1, R(2, one), 0, 0);
          emit(MM_X2, one, 1, 0);
          emit(MM_Y2, E(2, one), 0, 1);
          break;
        case MM_Y0:
          emit(MM_Y1, L(1, one), 0, 0);
          emit(MM_X0, one, 0, 1);
          emit(MM_Y0, E(1, one), 1, 0);
          break;
      }
      return out;
    }
    if (inputs.size() != 1) return out;
    // delta^1_2(P, b) = Phi(b) (x) P', with E_i mapping to E_{i+2}
    const Pure& b = inputs[0];
    Idem phiTgt = b.right;
    // the target's local pattern keeps the type; its size matches phi
    Idem locWanted = 0;
    for (Idem pat : mmdetail::primedPatterns(type))
      if ((popcount(pat) == 2) == ((phiTgt & 1u) != 0)) locWanted = pat;
    if (locWanted == 0 && !(phiTgt & 1u)) {
      for (Idem pat : mmdetail::primedPatterns(type))
        if (popcount(pat) == 1) locWanted = pat;
    }
    if (locWanted == 0) return out;
    Idem xTgt = (phiTgt >> 1 << 3) | locWanted;
    int tgt = genIndex(type, xTgt);
    if (tgt < 0) return out;
    int mn1 = AlgebraContext::minWeight(x, xTgt, 1);
    int mn2 = AlgebraContext::minWeight(x, xTgt, 2);
    if (mn1 != mn2) return out;
    Pure p;
    p.left = x;
    p.right = xTgt;
    p.w.assign(2 * n_ + 2, 0);
    p.w[0] = p.w[1] = mn1;
    for (int i = 0; i < 2 * n_; ++i) p.w[i + 2] = b.w[i];
    p.wz.assign(2, 0);
    for (uint8_t e : b.es) p.es.push_back((uint8_t)(e + 2));
    if (!out_->tripleIsZero(p.left, p.right, p.w)) out.push_back({p, tgt});
    return out;
  }

 private:
  int n_;
  Ctx out_, in_;
  std::vector<DAGen> gens_;
  std::vector<int> types_;
  std::map<std::pair<int, Idem>, int> index_;
};

inline std::shared_ptr<NMarkedMin> n_marked_min(int n, Matching matchOutLess = {}) {
  return std::make_shared<NMarkedMin>(n, std::move(matchOutLess));
}

// ---------------------------------------------------------------------------
// Duality: MarkedMin (x) CanonDD(n+1) and nMarkedMin (x) CanonDD(n), both
// reduced, must be isomorphic DD bimodules pairing B(2n,n) with nDuAlg(n+1)
// (the w,z monomials can sit in either factor and are compared jointly).

struct DualityReport {
  bool ok = false;
  std::string detail;
};

inline DualityReport verify_duality(int n, Matching matchOutLess = {}, bool unblocked = true) {
  DualityReport rep;
  auto mm = std::make_shared<MarkedMin>(n, matchOutLess, 0, unblocked, false);
  Matching m1 = mm->inCtx()->matching;
  TypeDD side1 = boxDADD(*mm, canon_dd(n + 1, m1));
  auto nmm = n_marked_min(n, matchOutLess);
  TypeDD side2 = ddSwap(boxDADD(*nmm, ddSwap(canon_dd(n, matchOutLess))));
  side1 = simplifyDD(std::move(side1));
  side2 = simplifyDD(std::move(side2));
  std::string why;
  rep.ok = ddIsomorphic(side1, side2, &why);
  if (!rep.ok) {
    rep.detail = "n=" + std::to_string(n) + ": " + why + " (side1 " + std::to_string(side1.gens.size()) +
                 " gens / " + std::to_string(side1.arrows.size()) + " arrows, side2 " +
                 std::to_string(side2.gens.size()) + " gens / " + std::to_string(side2.arrows.size()) +
                 " arrows)";
  }
  return rep;
}

}  // namespace hfl
