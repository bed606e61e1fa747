#include "perturb.hpp"

#include <algorithm>

namespace qhom {

QMatrix GradedMap::at(int n, const ChainComplex& src, const ChainComplex& tgt) const {
    auto it = comps.find(n);
    if (it != comps.end()) {
        if (it->second.rows() != tgt.dim(n + shift) || it->second.cols() != src.dim(n))
            fail_domain("graded map component at degree " + std::to_string(n) +
                        " has wrong shape");
        return it->second;
    }
    return QMatrix(tgt.dim(n + shift), src.dim(n));
}

namespace {

int lo_degree(const ChainComplex& a, const ChainComplex& b) {
    return std::min(a.min_degree(), b.min_degree()) - 1;
}

int hi_degree(const ChainComplex& a, const ChainComplex& b) {
    return std::max(a.max_degree(), b.max_degree()) + 1;
}

}  // namespace

SdrReport verify_sdr(const Sdr& s) {
    if (!s.j.is_chain_map()) return {false, "j", 0};
    if (!s.r.is_chain_map()) return {false, "r", 0};
    int lo = lo_degree(s.big, s.small);
    int hi = hi_degree(s.big, s.small);
    for (int n = lo; n <= hi; ++n) {
        if (s.r.component(n) * s.j.component(n) != QMatrix::identity(s.small.dim(n)))
            return {false, "rj", n};
        QMatrix hn = s.h.at(n, s.big, s.big);
        QMatrix hn1 = s.h.at(n - 1, s.big, s.big);
        QMatrix lhs = s.big.diff(n + 1) * hn + hn1 * s.big.diff(n);
        QMatrix rhs = QMatrix::identity(s.big.dim(n)) - s.j.component(n) * s.r.component(n);
        if (lhs != rhs) return {false, "homotopy", n};
        if (!(hn * s.j.component(n)).is_zero()) return {false, "hj", n};
        if (!(s.r.component(n + 1) * hn).is_zero()) return {false, "rh", n};
        if (!(s.h.at(n + 1, s.big, s.big) * hn).is_zero()) return {false, "hh", n};
    }
    return {};
}

Sdr normalize_side_conditions(const ChainComplex& big, const ChainComplex& small,
                              const ChainMap& j, const ChainMap& r, const GradedMap& h) {
    j.require_chain_map("sdr j");
    r.require_chain_map("sdr r");
    int lo = lo_degree(big, small);
    int hi = hi_degree(big, small);
    for (int n = lo; n <= hi; ++n) {
        if (r.component(n) * j.component(n) != QMatrix::identity(small.dim(n)))
            fail_domain("normalize_side_conditions: r j != id at degree " + std::to_string(n));
        QMatrix lhs = big.diff(n + 1) * h.at(n, big, big) + h.at(n - 1, big, big) * big.diff(n);
        QMatrix rhs = QMatrix::identity(big.dim(n)) - j.component(n) * r.component(n);
        if (lhs != rhs)
            fail_domain("normalize_side_conditions: homotopy identity fails at degree " +
                        std::to_string(n));
    }
    // h' = (id - jr) h (id - jr), then h'' = h' d h'.
    std::map<int, QMatrix> h1;
    for (int n = lo; n <= hi; ++n) {
        if (big.dim(n) == 0 || big.dim(n + 1) == 0) continue;
        QMatrix pi_n = QMatrix::identity(big.dim(n)) - j.component(n) * r.component(n);
        QMatrix pi_n1 =
            QMatrix::identity(big.dim(n + 1)) - j.component(n + 1) * r.component(n + 1);
        h1[n] = pi_n1 * h.at(n, big, big) * pi_n;
    }
    GradedMap hp{1, std::move(h1)};
    std::map<int, QMatrix> h2;
    for (int n = lo; n <= hi; ++n) {
        if (big.dim(n) == 0 || big.dim(n + 1) == 0) continue;
        h2[n] = hp.at(n, big, big) * big.diff(n + 1) * hp.at(n, big, big);
    }
    Sdr out{big, small, j, r, GradedMap{1, std::move(h2)}};
    SdrReport rep = verify_sdr(out);
    if (!rep.ok)
        fail_domain("normalization failed to produce an SDR (identity '" + rep.identity +
                    "' at degree " + std::to_string(rep.degree) + ")");
    return out;
}

Sdr homology_sdr(const ChainComplex& c) {
    HomologyData hom = homology(c);
    ChainComplex small(c.min_degree(), hom.betti, {});

    std::map<int, QMatrix> jc, rc, hc;
    // Per degree: columns of P = [image | representatives | anti-cycles].
    std::map<int, QMatrix> p_inv;
    std::map<int, std::vector<int>> apivots;
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
        if (c.dim(n) == 0) continue;
        RrefResult rin = rref(c.diff(n + 1));
        QMatrix image = c.diff(n + 1).columns(rin.pivot_columns);
        QMatrix reps = hom.representatives[n - c.min_degree()];
        RrefResult rout = rref(c.diff(n));
        QMatrix anti(c.dim(n), static_cast<int>(rout.pivot_columns.size()));
        for (int k = 0; k < anti.cols(); ++k) anti.at(rout.pivot_columns[k], k) = Rational(1);
        QMatrix p = image.hcat(reps).hcat(anti);
        if (p.rows() != p.cols() || !is_invertible(p))
            fail_domain("homology splitting is not a basis in degree " + std::to_string(n));
        p_inv[n] = inverse(p);
        apivots[n] = rout.pivot_columns;

        if (reps.cols() > 0) jc[n] = reps;
        if (small.dim(n) > 0) {
            QMatrix rn(small.dim(n), c.dim(n));
            for (int i = 0; i < small.dim(n); ++i)
                for (int col = 0; col < c.dim(n); ++col)
                    rn.at(i, col) = p_inv[n].at(image.cols() + i, col);
            rc[n] = std::move(rn);
        }
    }
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
        if (c.dim(n) == 0 || c.dim(n + 1) == 0) continue;
        int b = c.diff(n + 1).empty_shape() ? 0 : rank(c.diff(n + 1));
        if (b == 0) continue;
        // h sends the image basis vector d(e_p) to e_p and kills the rest.
        QMatrix sel(c.dim(n + 1), b);
        const auto& piv = apivots.count(n + 1) ? apivots[n + 1] : std::vector<int>{};
        for (int k = 0; k < b; ++k) sel.at(piv[k], k) = Rational(1);
        QMatrix coord(b, c.dim(n));
        for (int i = 0; i < b; ++i)
            for (int col = 0; col < c.dim(n); ++col) coord.at(i, col) = p_inv[n].at(i, col);
        hc[n] = sel * coord;
    }
    Sdr out{c, small, ChainMap(small, c, std::move(jc)), ChainMap(c, small, std::move(rc)),
            GradedMap{1, std::move(hc)}};
    SdrReport rep = verify_sdr(out);
    if (!rep.ok)
        fail_domain("homology SDR construction failed (identity '" + rep.identity +
                    "' at degree " + std::to_string(rep.degree) + ")");
    return out;
}

namespace {

using Deg0 = std::map<int, QMatrix>;  // degree-0 endomap of a complex

Deg0 deg0_identity(const ChainComplex& c) {
    Deg0 e;
    for (int n = c.min_degree(); n <= c.max_degree(); ++n)
        if (c.dim(n) > 0) e[n] = QMatrix::identity(c.dim(n));
    return e;
}

QMatrix deg0_at(const Deg0& e, const ChainComplex& c, int n) {
    auto it = e.find(n);
    if (it != e.end()) return it->second;
    return QMatrix(c.dim(n), c.dim(n));
}

bool deg0_zero(const Deg0& e) {
    for (const auto& [n, m] : e)
        if (!m.is_zero()) return false;
    return true;
}

}  // namespace

BplResult basic_perturbation(const Perturbation& p) {
    const Sdr& s = p.base;
    SdrReport srep = verify_sdr(s);
    if (!srep.ok)
        fail_domain("basic_perturbation: input SDR fails identity '" + srep.identity +
                    "' at degree " + std::to_string(srep.degree));
    if (p.t.shift != -1) fail_domain("perturbation must have degree -1");

    const ChainComplex& big = s.big;
    std::map<int, QMatrix> pert_d;
    for (int n = big.min_degree(); n <= big.max_degree() + 1; ++n)
        pert_d[n] = big.diff(n) + p.t.at(n, big, big);
    ChainComplex big_t(big.min_degree(), big.dims(), std::move(pert_d));
    ComplexReport crep = verify_complex(big_t);
    if (!crep.ok) fail_domain("(d + t)^2 != 0: " + crep.message);

    // (h t) and (t h) as degree-0 endomaps.
    Deg0 ht, th;
    for (int n = big.min_degree(); n <= big.max_degree(); ++n) {
        if (big.dim(n) == 0) continue;
        ht[n] = s.h.at(n - 1, big, big) * p.t.at(n, big, big);
        th[n] = p.t.at(n + 1, big, big) * s.h.at(n, big, big);
    }

    int cap = big.total_dim() + 1;
    Deg0 sum_ht = deg0_identity(big), sum_th = deg0_identity(big);
    Deg0 pow_ht = ht, pow_th = th;
    int power = 1;
    while (!deg0_zero(pow_ht) || !deg0_zero(pow_th)) {
        if (power > cap)
            fail_domain("perturbation is not nilpotent: (h t)^" + std::to_string(power - 1) +
                        " still nonzero at the dimension bound");
        for (auto& [n, m] : sum_ht) m = m + deg0_at(pow_ht, big, n);
        for (auto& [n, m] : sum_th) m = m + deg0_at(pow_th, big, n);
        for (auto& [n, m] : pow_ht) m = deg0_at(ht, big, n) * m;
        for (auto& [n, m] : pow_th) m = deg0_at(th, big, n) * m;
        ++power;
    }

    const ChainComplex& small = s.small;
    std::map<int, QMatrix> d_inf, j_inf, r_inf, h_inf;
    for (int n = small.min_degree(); n <= small.max_degree() + 1; ++n) {
        d_inf[n] = small.diff(n) + s.r.component(n - 1) * p.t.at(n, big, big) *
                                       deg0_at(sum_ht, big, n) * s.j.component(n);
    }
    ChainComplex small_t(small.min_degree(), small.dims(), std::move(d_inf));
    crep = verify_complex(small_t);
    if (!crep.ok) fail_domain("transferred differential fails d*d=0: " + crep.message);

    for (int n = big.min_degree(); n <= big.max_degree(); ++n) {
        if (small.dim(n) > 0 && big.dim(n) > 0) {
            j_inf[n] = deg0_at(sum_ht, big, n) * s.j.component(n);
            r_inf[n] = s.r.component(n) * deg0_at(sum_th, big, n);
        }
        if (big.dim(n) > 0 && big.dim(n + 1) > 0)
            h_inf[n] = s.h.at(n, big, big) * deg0_at(sum_th, big, n);
    }
    Sdr out{big_t, small_t, ChainMap(small_t, big_t, std::move(j_inf)),
            ChainMap(big_t, small_t, std::move(r_inf)), GradedMap{1, std::move(h_inf)}};
    SdrReport orep = verify_sdr(out);
    if (!orep.ok)
        fail_domain("perturbed SDR fails identity '" + orep.identity + "' at degree " +
                    std::to_string(orep.degree));
    return {std::move(out), power};
}

ChainComplex base_tensor_fiber(const ReducedSimplicialSet& base, const ChainComplex& fiber) {
    if (fiber.min_degree() < 0) fail_domain("fiber model must live in non-negative degrees");
    return tensor_product(normalized_chains(base), fiber);
}

namespace {

// Layout of K (x) F in tensor_product order: ascending base degree, then
// base index, then fiber index.
struct PairLayout {
    const ChainComplex& k;
    const ChainComplex& f;

    int index(int n, int p, int s, int ff) const {
        int off = 0;
        for (int q = k.min_degree(); q < p; ++q) off += k.dim(q) * f.dim(n - q);
        return off + s * f.dim(n - p) + ff;
    }

    std::array<int, 3> locate(int n, int pos) const {
        for (int p = k.min_degree(); p <= k.max_degree(); ++p) {
            int block = k.dim(p) * f.dim(n - p);
            if (pos < block) return {p, pos / f.dim(n - p), pos % f.dim(n - p)};
            pos -= block;
        }
        fail_domain("pair layout position out of range");
        return {};
    }
};

// id (x) u for a per-fiber-degree family u_q, with an optional Koszul sign
// (-1)^p applied when u shifts degree oddly.
std::map<int, QMatrix> tensor_with_identity(const ChainComplex& k, const ChainComplex& f_src,
                                            const ChainComplex& f_tgt,
                                            const std::map<int, QMatrix>& u, int shift,
                                            bool koszul) {
    ChainComplex src = tensor_product(k, f_src);
    ChainComplex tgt = tensor_product(k, f_tgt);
    PairLayout ls{k, f_src}, lt{k, f_tgt};
    std::map<int, QMatrix> out;
    for (int n = src.min_degree(); n <= src.max_degree(); ++n) {
        if (src.dim(n) == 0 || tgt.dim(n + shift) == 0) continue;
        QMatrix m(tgt.dim(n + shift), src.dim(n));
        for (int p = k.min_degree(); p <= k.max_degree(); ++p) {
            int q = n - p;
            if (k.dim(p) == 0 || f_src.dim(q) == 0 || f_tgt.dim(q + shift) == 0) continue;
            auto it = u.find(q);
            if (it == u.end()) continue;
            const QMatrix& uq = it->second;
            Rational sign(koszul && p % 2 != 0 ? -1 : 1);
            for (int s = 0; s < k.dim(p); ++s)
                for (int a = 0; a < f_src.dim(q); ++a)
                    for (int b = 0; b < f_tgt.dim(q + shift); ++b)
                        if (!uq.at(b, a).is_zero())
                            m.at(lt.index(n + shift, p, s, b), ls.index(n, p, s, a)) =
                                sign * uq.at(b, a);
        }
        out[n] = std::move(m);
    }
    return out;
}

}  // namespace

Sdr tensor_sdr(const ReducedSimplicialSet& base, const Sdr& fiber_sdr) {
    ChainComplex k = normalized_chains(base);
    ChainComplex big = tensor_product(k, fiber_sdr.big);
    ChainComplex small = tensor_product(k, fiber_sdr.small);

    std::map<int, QMatrix> jq, rq, hq;
    for (int q = fiber_sdr.big.min_degree(); q <= fiber_sdr.big.max_degree(); ++q) {
        jq[q] = fiber_sdr.j.component(q);
        rq[q] = fiber_sdr.r.component(q);
        hq[q] = fiber_sdr.h.at(q, fiber_sdr.big, fiber_sdr.big);
    }
    Sdr out{big, small,
            ChainMap(small, big,
                     tensor_with_identity(k, fiber_sdr.small, fiber_sdr.big, jq, 0, false)),
            ChainMap(big, small,
                     tensor_with_identity(k, fiber_sdr.big, fiber_sdr.small, rq, 0, false)),
            GradedMap{1, tensor_with_identity(k, fiber_sdr.big, fiber_sdr.big, hq, 1, true)}};
    SdrReport rep = verify_sdr(out);
    if (!rep.ok)
        fail_domain("tensor SDR fails identity '" + rep.identity + "' at degree " +
                    std::to_string(rep.degree));
    return out;
}

TransferContext transferred_twisting(const ReducedSimplicialSet& base,
                                     const ChainComplex& fiber_model, const GradedMap& t) {
    ChainComplex k = normalized_chains(base);
    ChainComplex big = base_tensor_fiber(base, fiber_model);
    PairLayout lay{k, fiber_model};

    if (t.shift != -1) fail_domain("perturbation must have degree -1");
    for (int n = big.min_degree(); n <= big.max_degree(); ++n) {
        QMatrix tn = t.at(n, big, big);
        for (int col = 0; col < tn.cols(); ++col)
            for (int row = 0; row < tn.rows(); ++row) {
                if (tn.at(row, col).is_zero()) continue;
                auto [p_src, s_src, f_src] = lay.locate(n, col);
                auto [p_tgt, s_tgt, f_tgt] = lay.locate(n - 1, row);
                (void)s_src; (void)f_src; (void)s_tgt; (void)f_tgt;
                if (p_tgt >= p_src)
                    fail_domain("perturbation must lower the base degree (entry at total degree " +
                                std::to_string(n) + " goes from base degree " +
                                std::to_string(p_src) + " to " + std::to_string(p_tgt) + ")");
            }
    }

    Sdr sdr = tensor_sdr(base, homology_sdr(fiber_model));
    BplResult bpl = basic_perturbation({sdr, t});

    GradedModule h_module;
    HomologyData fh = homology(fiber_model);
    for (int q = 0; q <= fiber_model.max_degree(); ++q) h_module.dims.push_back(fh.betti_at(q));
    while (!h_module.dims.empty() && h_module.dims.back() == 0) h_module.dims.pop_back();

    // Read the cochain off the transferred differential: the component of
    // d_inf(s (x) z) on pt (x) H is phi(s)(z).
    TwistingCochain phi(base, h_module);
    TwistedLayout tl = twisted_layout(base, h_module);
    const ChainComplex& small = bpl.perturbed.small;
    for (int d = 1; d <= base.top_dim(); ++d)
        for (int s = 0; s < base.count(d); ++s) {
            EndElement comp(h_module, d - 1);
            bool nonzero = false;
            for (int q = 0; q <= h_module.top(); ++q) {
                if (h_module.dim(q) == 0 || h_module.dim(q + d - 1) == 0) continue;
                int n = d + q;
                QMatrix dm = small.diff(n);
                for (int f = 0; f < h_module.dim(q); ++f)
                    for (int fp = 0; fp < h_module.dim(q + d - 1); ++fp) {
                        Rational v = dm.at(tl.index(n - 1, 0, 0, fp), tl.index(n, d, s, f));
                        if (!v.is_zero()) {
                            comp.block(q).at(fp, f) = v;
                            nonzero = true;
                        }
                    }
            }
            if (nonzero) phi.set(base.simplex(d, s).id, comp);
        }

    TwistReport trep = verify_twisting(phi);
    if (!trep.ok)
        fail_domain("transferred cochain fails the twisting identity on '" + trep.simplex +
                    "' (sign convention bug or non-twisted perturbation)");
    ChainComplex twisted = twisted_tensor(phi);
    if (!(twisted == small))
        fail_domain("transferred differential is not the twisted differential of the "
                    "extracted cochain");
    return {base, fiber_model, big, t, std::move(phi), std::move(twisted), std::move(bpl.perturbed)};
}

ChainMap induced_map_infinity(const ChainMap& g_fiber, const TransferContext& ctx_p,
                              const TransferContext& ctx_q) {
    if (!(ctx_p.base == ctx_q.base)) fail_domain("induced map: contexts have different bases");
    if (!(g_fiber.source() == ctx_p.fiber_model) || !(g_fiber.target() == ctx_q.fiber_model))
        fail_domain("induced map: fiber map endpoints do not match the contexts");
    g_fiber.require_chain_map("fiber map");

    ChainComplex k = normalized_chains(ctx_p.base);
    std::map<int, QMatrix> gq;
    for (int q = ctx_p.fiber_model.min_degree(); q <= ctx_p.fiber_model.max_degree(); ++q)
        gq[q] = g_fiber.component(q);
    ChainMap mid(ctx_p.sdr.big, ctx_q.sdr.big,
                 tensor_with_identity(k, ctx_p.fiber_model, ctx_q.fiber_model, gq, 0, false));

    ChainMap g_inf = ctx_q.sdr.r.compose(mid).compose(ctx_p.sdr.j);
    g_inf.require_chain_map("induced map g_inf");

    // Filtration preservation and the induced map on quotients (Prop-style
    // block checks): entries never lower the fiber degree, and the diagonal
    // fiber-degree blocks are id (x) H(g).
    TwistedLayout lp = twisted_layout(ctx_p.base, ctx_p.phi.fiber());
    TwistedLayout lq = twisted_layout(ctx_q.base, ctx_q.phi.fiber());
    Sdr hp = homology_sdr(ctx_p.fiber_model);
    Sdr hq = homology_sdr(ctx_q.fiber_model);
    ChainMap h_of_g = hq.r.compose(g_fiber).compose(hp.j);
    for (int n = ctx_p.twisted.min_degree(); n <= ctx_p.twisted.max_degree(); ++n) {
        QMatrix m = g_inf.component(n);
        for (int col = 0; col < m.cols(); ++col) {
            auto [p_src, s_src, f_src] = lp.locate(n, col);
            int q_src = n - p_src;
            for (int row = 0; row < m.rows(); ++row) {
                auto [p_tgt, s_tgt, f_tgt] = lq.locate(n, row);
                int q_tgt = n - p_tgt;
                const Rational& v = m.at(row, col);
                if (q_tgt < q_src && !v.is_zero())
                    fail_domain("induced map drops the homological filtration at degree " +
                                std::to_string(n));
                if (q_tgt == q_src) {
                    Rational expect;
                    if (p_tgt == p_src && s_tgt == s_src)
                        expect = h_of_g.component(q_src).at(f_tgt, f_src);
                    if (v != expect)
                        fail_domain("induced map is not id (x) H(g) on the filtration "
                                    "quotient at degree " + std::to_string(n));
                }
            }
        }
    }
    return g_inf;
}

}  // namespace qhom
