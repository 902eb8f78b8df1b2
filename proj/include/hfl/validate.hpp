// Exhaustive validation of DA bimodules inside a weight/arity window: the
// curved structure relation, grading homogeneity, idempotent bookkeeping,
// strict unitality, and the arity bound.

#pragma once

#include "hfl/structures.hpp"

namespace hfl {

struct DACheckOptions {
  int maxInputs = 3;        // longest input sequence fed to the relation
  int maxTotalWeight2 = 8;  // doubled total weight across the sequence
  int maxESize = 2;         // E-letters per input (dual algebras)
  int maxWz = 0;            // link-variable exponents per input
  bool checkGradings = true;
};

namespace detail {

// all pure elements with the given left idempotent and doubled weight budget
inline void enumeratePures(const Ctx& ctx, Idem left, int budget2, int maxE, int maxWz,
                           const std::function<void(const Pure&)>& fn) {
  Algebra A(ctx);
  ctx->enumerateIdems([&](Idem right) {
    std::vector<int> base(ctx->m);
    int minTotal = 0;
    for (int t = 1; t <= ctx->m; ++t) {
      base[t - 1] = AlgebraContext::minWeight(left, right, t);
      minTotal += base[t - 1];
    }
    if (minTotal > budget2) return;
    std::vector<int> w(base);
    std::function<void(int, int)> rec = [&](int pos, int used) {
      if (pos == ctx->m) {
        auto withES = [&](std::vector<uint8_t> es) {
          auto withWz = [&](std::vector<int> wz) {
            if (ctx->tripleIsZero(left, right, w)) return;
            Pure p;
            p.left = left;
            p.right = right;
            p.w = w;
            p.wz = std::move(wz);
            p.es = std::move(es);
            if (!p.isIdempotent()) fn(p);
          };
          if (maxWz <= 0 || ctx->ell == 0) {
            withWz(std::vector<int>(2 * ctx->ell, 0));
          } else {
            // one link-variable at a time is enough to exercise transport
            withWz(std::vector<int>(2 * ctx->ell, 0));
            for (int s = 0; s < 2 * ctx->ell; ++s) {
              std::vector<int> wz(2 * ctx->ell, 0);
              wz[s] = 1;
              withWz(std::move(wz));
            }
          }
        };
        if (ctx->flavor == Flavor::Dual && maxE > 0) {
          std::vector<std::vector<uint8_t>> esets = {{}};
          for (uint8_t e = 1; e <= (uint8_t)ctx->m; ++e) {
            size_t sz = esets.size();
            for (size_t i = 0; i < sz; ++i) {
              if ((int)esets[i].size() >= maxE) continue;
              auto copy = esets[i];
              copy.push_back(e);
              esets.push_back(std::move(copy));
            }
          }
          for (auto& es : esets) withES(es);
        } else {
          withES({});
        }
        return;
      }
      for (int v = base[pos]; used - base[pos] + v <= budget2; v += 2) {
        w[pos] = v;
        rec(pos + 1, used - base[pos] + v);
      }
    };
    rec(0, minTotal);
  });
}

inline int pureWeight2(const Pure& p) { return p.totalWeight2(); }

}  // namespace detail

// The curved DA structure relation applied to (g, a_1..a_k):
//   sum over splits  delta(delta(g, a_1..a_i), a_{i+1}..a_k)
// + sum_i delta(g, .., d(a_i), ..)                      [input differentials]
// + sum_i delta(g, .., a_i a_{i+1}, ..)                 [adjacent products]
// + d_out(delta(g, a_1..a_k))                           [output differential]
// + [k=0] mu0_out . iota(g) (x) g
// + sum over slots  delta(g, .., mu0_in-insertion, ..)
// must vanish identically.
inline ValidationReport checkDA(const DABimodule& M, const DACheckOptions& opt = {}) {
  ValidationReport rep;
  Algebra outAlg(M.outCtx()), inAlg(M.inCtx());
  bool inDual = M.inCtx()->flavor == Flavor::Dual;
  bool outDual = M.outCtx()->flavor == Flavor::Dual;
  auto amap = M.alexMap();

  auto applyTerm = [&](int g, const std::vector<Pure>& seq, std::map<std::pair<int, std::string>, Elt>& acc,
                       auto key) {
    (void)acc;
    (void)key;
    return M.delta(g, std::span<const Pure>(seq.data(), seq.size()));
  };
  (void)applyTerm;

  for (int g = 0; g < M.numGens(); ++g) {
    // enumerate input sequences by extending on the right
    std::vector<std::vector<Pure>> frontier = {{}};
    for (int len = 0; len <= opt.maxInputs; ++len) {
      std::vector<std::vector<Pure>> next;
      for (auto& seq : frontier) {
        // ---- run the relation on this sequence ----
        std::map<int, Elt> total;  // target generator -> coefficient sum
        auto addTerms = [&](const std::vector<DATerm>& ts, const Elt& pre) {
          for (auto& t : ts) {
            Elt c = outAlg.mul(pre, Elt(t.out));
            if (c.zero()) continue;
            auto& slot = total[t.target];
            slot.add(c);
            if (slot.zero()) total.erase(t.target);
          }
        };
        int k = (int)seq.size();
        // splits
        for (int i = 0; i <= k; ++i) {
          std::vector<Pure> pre(seq.begin(), seq.begin() + i);
          std::vector<Pure> post(seq.begin() + i, seq.end());
          auto firstHalf = M.delta(g, std::span<const Pure>(pre.data(), pre.size()));
          for (auto& t1 : firstHalf) {
            auto secondHalf = M.delta(t1.target, std::span<const Pure>(post.data(), post.size()));
            addTerms(secondHalf, Elt(t1.out));
          }
        }
        // input differentials
        if (inDual)
          for (int i = 0; i < k; ++i) {
            Elt d = inAlg.differential(seq[i]);
            for (auto& dp : d.terms) {
              auto seq2 = seq;
              seq2[i] = dp;
              addTerms(M.delta(g, std::span<const Pure>(seq2.data(), seq2.size())), outAlg.idem(M.gen(g).outIdem));
            }
          }
        // adjacent products
        for (int i = 0; i + 1 < k; ++i) {
          Elt prod = inAlg.mul(seq[i], seq[i + 1]);
          for (auto& pp : prod.terms) {
            std::vector<Pure> seq2;
            seq2.insert(seq2.end(), seq.begin(), seq.begin() + i);
            seq2.push_back(pp);
            seq2.insert(seq2.end(), seq.begin() + i + 2, seq.end());
            addTerms(M.delta(g, std::span<const Pure>(seq2.data(), seq2.size())), outAlg.idem(M.gen(g).outIdem));
          }
        }
        // output differential
        if (outDual) {
          auto ts = M.delta(g, std::span<const Pure>(seq.data(), seq.size()));
          for (auto& t : ts) {
            Elt d = outAlg.differential(t.out);
            if (d.zero()) continue;
            auto& slot = total[t.target];
            slot.add(d);
            if (slot.zero()) total.erase(t.target);
          }
        }
        // curvature terms
        if (k == 0 && !outDual) {
          Elt mu = outAlg.curvatureAt(M.gen(g).outIdem);
          if (!mu.zero()) {
            auto& slot = total[g];
            slot.add(mu);
            if (slot.zero()) total.erase(g);
          }
        }
        if (!inDual) {
          for (int i = 0; i <= k; ++i) {
            Idem at = i == 0 ? M.gen(g).inIdem : seq[i - 1].right;
            Elt mu = inAlg.curvatureAt(at);
            for (auto& mp : mu.terms) {
              std::vector<Pure> seq2;
              seq2.insert(seq2.end(), seq.begin(), seq.begin() + i);
              seq2.push_back(mp);
              seq2.insert(seq2.end(), seq.begin() + i, seq.end());
              addTerms(M.delta(g, std::span<const Pure>(seq2.data(), seq2.size())),
                       outAlg.idem(M.gen(g).outIdem));
            }
          }
        }
        if (!total.empty()) {
          std::ostringstream os;
          os << "DA relation fails at " << M.gen(g).name << " with inputs [";
          for (auto& a : seq)
            os << " (" << idem_str(a.left) << "->" << idem_str(a.right) << " w=" << a.totalWeight2() << ")";
          os << " ] -> " << total.size() << " targets survive, first: " << M.gen(total.begin()->first).name;
          rep.fail(os.str());
        }
        // ---- grading / idempotent checks on the action itself ----
        if (opt.checkGradings && k <= M.maxArity()) {
          auto ts = M.delta(g, std::span<const Pure>(seq.data(), seq.size()));
          for (auto& t : ts) {
            const auto& gsrc = M.gen(g);
            const auto& gtgt = M.gen(t.target);
            if (t.out.left != gsrc.outIdem || t.out.right != gtgt.outIdem)
              rep.fail("idempotent mismatch in action at " + gsrc.name);
            int dshift = (k - 1) * 2 - outAlg.delta2(t.out);
            for (auto& a : seq) dshift += inAlg.delta2(a);
            if (gtgt.delta2 != gsrc.delta2 + dshift)
              rep.fail("Delta-inhomogeneous action at " + gsrc.name + " -> " + gtgt.name);
            if (!amap.empty() && amap[0] >= 0) {
              std::vector<int> shift(gsrc.alex2.size(), 0);
              for (auto& a : seq) {
                auto av = inAlg.alexander2(a);
                for (size_t s = 0; s < av.size(); ++s)
                  if (amap[s] >= 0) shift[amap[s]] += av[s];
              }
              auto ov = outAlg.alexander2(t.out);
              for (size_t s = 0; s < ov.size(); ++s) shift[s] -= ov[s];
              for (size_t s = 0; s < shift.size(); ++s)
                if (gtgt.alex2[s] != gsrc.alex2[s] + shift[s]) {
                  rep.fail("Alexander-inhomogeneous action at " + gsrc.name + " -> " + gtgt.name);
                  break;
                }
            }
          }
        }
        // ---- arity bound ----
        if (k > M.maxArity()) {
          auto ts = M.delta(g, std::span<const Pure>(seq.data(), seq.size()));
          if (!ts.empty()) rep.fail("action above the declared arity bound at " + M.gen(g).name);
        }
        // ---- extend the frontier ----
        if (len < opt.maxInputs) {
          int usedWeight = 0;
          for (auto& a : seq) usedWeight += a.totalWeight2();
          Idem from = seq.empty() ? M.gen(g).inIdem : seq.back().right;
          detail::enumeratePures(M.inCtx(), from, opt.maxTotalWeight2 - usedWeight, opt.maxESize, opt.maxWz,
                                 [&](const Pure& p) {
                                   auto seq2 = seq;
                                   seq2.push_back(p);
                                   next.push_back(std::move(seq2));
                                 });
        }
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
  }
  // strict unitality
  for (int g = 0; g < M.numGens(); ++g) {
    Pure unit;
    unit.left = unit.right = M.gen(g).inIdem;
    unit.w.assign(M.inCtx()->m, 0);
    unit.wz.assign(2 * M.inCtx()->ell, 0);
    std::vector<Pure> seq = {unit};
    auto ts = M.delta(g, std::span<const Pure>(seq.data(), seq.size()));
    bool good = ts.size() == 1 && ts[0].target == g && ts[0].out.isIdempotent();
    if (!good) rep.fail("unit clause violated at " + M.gen(g).name);
  }
  return rep;
}

}  // namespace hfl
