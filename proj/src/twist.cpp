#include "twist.hpp"

namespace qhom {

int GradedModule::total() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

int GradedModule::offset(int q) const {
    int off = 0;
    for (int k = 0; k < q && k < static_cast<int>(dims.size()); ++k) off += dims[k];
    return off;
}

EndElement::EndElement(const GradedModule& h, int shift) : h_(h), shift_(shift) {
    for (int q = 0; q <= h_.top(); ++q) blocks_.emplace_back(h_.dim(q + shift), h_.dim(q));
}

const QMatrix& EndElement::block(int q) const {
    static const QMatrix empty;
    if (q < 0 || q >= static_cast<int>(blocks_.size())) return empty;
    return blocks_[q];
}

QMatrix& EndElement::block(int q) {
    return blocks_[q];
}

bool EndElement::is_zero() const {
    for (const QMatrix& b : blocks_)
        if (!b.is_zero()) return false;
    return true;
}

EndElement EndElement::compose(const EndElement& other) const {
    if (!(h_ == other.h_)) fail_domain("End composition over different modules");
    EndElement out(h_, shift_ + other.shift_);
    for (int q = 0; q <= h_.top(); ++q) {
        if (h_.dim(q) == 0 || h_.dim(q + other.shift_) == 0 ||
            h_.dim(q + other.shift_ + shift_) == 0)
            continue;
        out.block(q) = block(q + other.shift_) * other.block(q);
    }
    return out;
}

EndElement EndElement::operator+(const EndElement& o) const {
    if (!(h_ == o.h_) || shift_ != o.shift_) fail_domain("End sum shape mismatch");
    EndElement out = *this;
    for (int q = 0; q <= h_.top(); ++q)
        if (!out.blocks_[q].empty_shape()) out.blocks_[q] = out.blocks_[q] + o.blocks_[q];
    return out;
}

EndElement EndElement::operator-(const EndElement& o) const {
    return *this + o.scaled(Rational(-1));
}

EndElement EndElement::scaled(const Rational& s) const {
    EndElement out = *this;
    for (QMatrix& b : out.blocks_) b = b.scaled(s);
    return out;
}

QMatrix EndElement::flat() const {
    QMatrix m(h_.total(), h_.total());
    for (int q = 0; q <= h_.top(); ++q) {
        const QMatrix& b = block(q);
        for (int r = 0; r < b.rows(); ++r)
            for (int c = 0; c < b.cols(); ++c)
                m.at(h_.offset(q + shift_) + r, h_.offset(q) + c) = b.at(r, c);
    }
    return m;
}

EndElement EndElement::from_flat(const GradedModule& h, int shift, const QMatrix& m) {
    if (m.rows() != h.total() || m.cols() != h.total())
        fail_domain("flat End matrix has wrong size");
    EndElement out(h, shift);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            if (m.at(r, c).is_zero()) continue;
            // Locate the degrees of row r and column c.
            int qr = 0;
            while (r >= h.offset(qr) + h.dim(qr)) ++qr;
            int qc = 0;
            while (c >= h.offset(qc) + h.dim(qc)) ++qc;
            if (qr != qc + shift)
                fail_domain("flat End matrix has an entry outside the degree-" +
                            std::to_string(shift) + " blocks");
            out.block(qc).at(r - h.offset(qr), c - h.offset(qc)) = m.at(r, c);
        }
    return out;
}

bool operator==(const EndElement& a, const EndElement& b) {
    return a.h_ == b.h_ && a.shift_ == b.shift_ && a.blocks_ == b.blocks_;
}

TwistingCochain::TwistingCochain(ReducedSimplicialSet base, GradedModule fiber)
    : base_(std::move(base)), fiber_(std::move(fiber)) {}

void TwistingCochain::set(const std::string& simplex_id, EndElement value) {
    int d = base_.dim_of(simplex_id);
    if (d < 1) fail_domain("twisting cochain has no degree-0 components");
    if (value.shift() != d - 1)
        fail_domain("component on '" + simplex_id + "' must raise fiber degree by " +
                    std::to_string(d - 1));
    if (!(value.module() == fiber_)) fail_domain("component over mismatched fiber module");
    if (value.is_zero())
        comps_.erase(simplex_id);
    else
        comps_[simplex_id] = std::move(value);
}

EndElement TwistingCochain::at(const SimplexElement& el) const {
    if (el.degenerate()) return EndElement(fiber_, base_.element_dim(el) - 1);
    return at(el.base);
}

EndElement TwistingCochain::at(const std::string& id) const {
    auto it = comps_.find(id);
    if (it != comps_.end()) return it->second;
    return EndElement(fiber_, base_.dim_of(id) - 1);
}

EndElement cup_at(const TwistingCochain& phi, const TwistingCochain& psi, const std::string& id) {
    if (!(phi.base() == psi.base()) || !(phi.fiber() == psi.fiber()))
        fail_domain("cup product over mismatched base or fiber");
    const ReducedSimplicialSet& x = phi.base();
    int n = x.dim_of(id);
    EndElement acc(phi.fiber(), n - 2);
    for (int i = 1; i <= n - 1; ++i) {
        SimplexElement f = front_face(x, id, i);
        SimplexElement b = back_face(x, id, i);
        if (f.degenerate() || b.degenerate()) continue;
        EndElement term = phi.at(f).compose(psi.at(b));
        acc = (i % 2 == 1) ? acc + term : acc - term;
    }
    return acc;
}

TwistReport verify_twisting(const TwistingCochain& phi) {
    const ReducedSimplicialSet& x = phi.base();
    for (int d = 2; d <= x.top_dim(); ++d)
        for (int s = 0; s < x.count(d); ++s) {
            const std::string& id = x.simplex(d, s).id;
            EndElement phi_boundary(phi.fiber(), d - 2);
            SimplexElement el{{}, id};
            for (int i = 0; i <= d; ++i) {
                SimplexElement f = x.face(el, i);
                if (f.degenerate()) continue;
                EndElement v = phi.at(f.base);
                phi_boundary = (i % 2 == 0) ? phi_boundary + v : phi_boundary - v;
            }
            EndElement lhs = cup_at(phi, phi, id) - phi_boundary;
            if (!lhs.is_zero())
                return {false, id,
                        "twisting identity -phi(d s) + (phi u phi)(s) != 0 on '" + id + "'"};
        }
    return {};
}

std::vector<TensorTerm> cap(const TwistingCochain& phi, const TensorTerm& term) {
    const ReducedSimplicialSet& x = phi.base();
    std::vector<TensorTerm> out;
    if (term.simplex.degenerate() || term.coeff.is_zero()) return out;
    if (phi.fiber().dim(term.fiber_degree) <= term.fiber_index)
        fail_domain("cap: fiber index out of range");
    const std::string& id = term.simplex.base;
    int n = x.dim_of(id);
    for (int i = 0; i <= n - 1; ++i) {
        SimplexElement f = front_face(x, id, i);
        if (f.degenerate()) continue;
        SimplexElement b = back_face(x, id, i);
        EndElement v = phi.at(b);
        const QMatrix& blk = v.block(term.fiber_degree);
        if (blk.empty_shape()) continue;
        Rational sign(i % 2 == 0 ? 1 : -1);
        for (int r = 0; r < blk.rows(); ++r) {
            if (blk.at(r, term.fiber_index).is_zero()) continue;
            out.push_back({f, term.fiber_degree + (n - i) - 1, r,
                           term.coeff * sign * blk.at(r, term.fiber_index)});
        }
    }
    return out;
}

int TwistedLayout::dim(int n) const {
    int t = 0;
    for (int p = 0; p <= base_chains.max_degree(); ++p)
        t += base_chains.dim(p) * fiber.dim(n - p);
    return t;
}

int TwistedLayout::index(int n, int p, int s, int f) const {
    int off = 0;
    for (int q = 0; q < p; ++q) off += base_chains.dim(q) * fiber.dim(n - q);
    return off + s * fiber.dim(n - p) + f;
}

std::array<int, 3> TwistedLayout::locate(int n, int pos) const {
    for (int p = 0; p <= base_chains.max_degree(); ++p) {
        int block = base_chains.dim(p) * fiber.dim(n - p);
        if (pos < block) return {p, pos / fiber.dim(n - p), pos % fiber.dim(n - p)};
        pos -= block;
    }
    fail_domain("twisted layout position out of range");
    return {};
}

TwistedLayout twisted_layout(const ReducedSimplicialSet& base, const GradedModule& fiber) {
    return {normalized_chains(base), fiber};
}

ChainComplex twisted_differential_unchecked(const TwistingCochain& phi) {
    const ReducedSimplicialSet& x = phi.base();
    TwistedLayout lay = twisted_layout(x, phi.fiber());
    int hi = lay.base_chains.max_degree() + std::max(phi.fiber().top(), 0);
    std::vector<int> dims;
    for (int n = 0; n <= hi; ++n) dims.push_back(lay.dim(n));
    std::map<int, QMatrix> diffs;
    for (int n = 1; n <= hi; ++n) {
        QMatrix d(lay.dim(n - 1), lay.dim(n));
        for (int p = 0; p <= lay.base_chains.max_degree(); ++p) {
            int q = n - p;
            if (lay.base_chains.dim(p) == 0 || phi.fiber().dim(q) == 0) continue;
            QMatrix base_d = lay.base_chains.diff(p);
            for (int s = 0; s < lay.base_chains.dim(p); ++s) {
                const std::string& id = x.simplex(p, s).id;
                for (int f = 0; f < phi.fiber().dim(q); ++f) {
                    int col = lay.index(n, p, s, f);
                    for (int r = 0; r < lay.base_chains.dim(p - 1); ++r)
                        if (!base_d.at(r, s).is_zero())
                            d.at(lay.index(n - 1, p - 1, r, f), col) += base_d.at(r, s);
                    for (const TensorTerm& t : cap(phi, {{{}, id}, q, f, Rational(1)})) {
                        int fp = x.dim_of(t.simplex.base);
                        d.at(lay.index(n - 1, fp, x.index_of(t.simplex.base), t.fiber_index),
                             col) += t.coeff;
                    }
                }
            }
        }
        diffs[n] = std::move(d);
    }
    return ChainComplex(0, std::move(dims), std::move(diffs));
}

ChainComplex twisted_tensor(const TwistingCochain& phi) {
    TwistReport rep = verify_twisting(phi);
    if (!rep.ok) fail_domain("twisted tensor refused: " + rep.message);
    ChainComplex t = twisted_differential_unchecked(phi);
    ComplexReport cr = verify_complex(t);
    if (!cr.ok) fail_domain("twisted differential fails d*d=0: " + cr.message);
    long long chi_base = 0;
    for (int p = 0; p <= phi.base().top_dim(); ++p)
        chi_base += (p % 2 == 0 ? 1 : -1) * phi.base().count(p);
    long long chi_fiber = 0;
    for (int q = 0; q <= phi.fiber().top(); ++q)
        chi_fiber += (q % 2 == 0 ? 1 : -1) * phi.fiber().dim(q);
    if (euler_characteristic(t) != chi_base * chi_fiber)
        fail_domain("twisted tensor Euler characteristic mismatch");
    return t;
}

namespace {

// Positions of degree-n twisted basis elements whose fiber degree satisfies a
// predicate, in layout order.
template <typename Pred>
std::vector<int> select_positions(const TwistedLayout& lay, int n, Pred keep) {
    std::vector<int> out;
    int pos = 0;
    for (int p = 0; p <= lay.base_chains.max_degree(); ++p) {
        int q = n - p;
        int block = lay.base_chains.dim(p) * lay.fiber.dim(q);
        for (int k = 0; k < block; ++k, ++pos)
            if (keep(q)) out.push_back(pos);
    }
    return out;
}

}  // namespace

FiltrationLevel homological_filtration(const TwistingCochain& phi, int n) {
    ChainComplex total = twisted_tensor(phi);
    TwistedLayout lay = twisted_layout(phi.base(), phi.fiber());

    std::vector<std::vector<int>> kept;
    std::vector<int> dims;
    for (int deg = 0; deg <= total.max_degree(); ++deg) {
        kept.push_back(select_positions(lay, deg, [&](int q) { return q >= n; }));
        dims.push_back(static_cast<int>(kept.back().size()));
    }
    std::map<int, QMatrix> diffs;
    std::map<int, QMatrix> inc;
    for (int deg = 0; deg <= total.max_degree(); ++deg) {
        if (deg >= 1) {
            QMatrix full = total.diff(deg);
            QMatrix d(dims[deg - 1], dims[deg]);
            for (int c = 0; c < dims[deg]; ++c)
                for (int r = 0; r < dims[deg - 1]; ++r)
                    d.at(r, c) = full.at(kept[deg - 1][r], kept[deg][c]);
            diffs[deg] = std::move(d);
        }
        QMatrix m(total.dim(deg), dims[deg]);
        for (int c = 0; c < dims[deg]; ++c) m.at(kept[deg][c], c) = Rational(1);
        inc[deg] = std::move(m);
    }
    ChainComplex level(0, std::move(dims), std::move(diffs));
    ComplexReport cr = verify_complex(level);
    if (!cr.ok) fail_domain("filtration level fails d*d=0: " + cr.message);
    ChainMap inclusion(level, total, std::move(inc));
    inclusion.require_chain_map("filtration inclusion");
    return {std::move(level), std::move(inclusion)};
}

FiltrationQuotient filtration_quotient(const TwistingCochain& phi, int n) {
    ChainComplex total = twisted_tensor(phi);
    TwistedLayout lay = twisted_layout(phi.base(), phi.fiber());
    const ReducedSimplicialSet& x = phi.base();

    // Cokernel route: basis elements with fiber degree exactly n. Since the
    // twisted term only raises fiber degree, rows of fiber degree n capture
    // the induced differential on L_n / L_{n+1}.
    std::vector<std::vector<int>> kept;
    std::vector<int> dims;
    for (int deg = 0; deg <= total.max_degree(); ++deg) {
        kept.push_back(select_positions(lay, deg, [&](int q) { return q == n; }));
        dims.push_back(static_cast<int>(kept.back().size()));
    }
    std::map<int, QMatrix> diffs;
    for (int deg = 1; deg <= total.max_degree(); ++deg) {
        QMatrix full = total.diff(deg);
        QMatrix d(dims[deg - 1], dims[deg]);
        for (int c = 0; c < dims[deg]; ++c)
            for (int r = 0; r < dims[deg - 1]; ++r)
                d.at(r, c) = full.at(kept[deg - 1][r], kept[deg][c]);
        diffs[deg] = std::move(d);
    }
    ChainComplex coker(0, dims, std::move(diffs));

    // Direct route: base chains tensored with H_n, differential twisted only
    // by the degree-1 part, with the cap product's Koszul sign.
    std::map<int, QMatrix> direct_diffs;
    int hn = phi.fiber().dim(n);
    for (int deg = 1; deg <= total.max_degree(); ++deg) {
        int k = deg - n;  // base simplex dimension of this piece
        QMatrix d(dims[deg - 1], dims[deg]);
        if (hn > 0 && k >= 1 && k <= x.top_dim()) {
            QMatrix base_d = lay.base_chains.diff(k);
            for (int s = 0; s < x.count(k); ++s) {
                const std::string& id = x.simplex(k, s).id;
                for (int f = 0; f < hn; ++f) {
                    int col = s * hn + f;
                    for (int r = 0; r < x.count(k - 1); ++r)
                        if (!base_d.at(r, s).is_zero())
                            d.at(r * hn + f, col) += base_d.at(r, s);
                    SimplexElement fr = front_face(x, id, k - 1);
                    SimplexElement bk = back_face(x, id, k - 1);
                    if (fr.degenerate() || bk.degenerate()) continue;
                    EndElement edge_value = phi.at(bk);
                    const QMatrix& blk = edge_value.block(n);
                    if (blk.empty_shape()) continue;
                    Rational sign((k - 1) % 2 == 0 ? 1 : -1);
                    int fs = x.index_of(fr.base);
                    for (int r = 0; r < hn; ++r)
                        if (!blk.at(r, f).is_zero())
                            d.at(fs * hn + r, col) += sign * blk.at(r, f);
                }
            }
        }
        direct_diffs[deg] = std::move(d);
    }
    ChainComplex direct(0, dims, std::move(direct_diffs));

    FiltrationQuotient out{coker, direct, coker == direct};
    ComplexReport cr = verify_complex(out.cokernel);
    if (!cr.ok) fail_domain("filtration quotient fails d*d=0: " + cr.message);
    return out;
}

ChainComplex relative_twisted(const SubComplexInclusion& pair, const TwistingCochain& phi) {
    if (!(pair.ambient() == phi.base()))
        fail_domain("relative twisted: pair and cochain have different ambient sets");
    ChainComplex total = twisted_tensor(phi);
    TwistedLayout lay = twisted_layout(phi.base(), phi.fiber());
    const ReducedSimplicialSet& x = phi.base();

    std::vector<std::vector<int>> kept;
    std::vector<int> dims;
    for (int deg = 0; deg <= total.max_degree(); ++deg) {
        std::vector<int> sel;
        for (int pos = 0; pos < total.dim(deg); ++pos) {
            auto [p, s, f] = lay.locate(deg, pos);
            (void)f;
            if (!pair.contains(x.simplex(p, s).id)) sel.push_back(pos);
        }
        kept.push_back(std::move(sel));
        dims.push_back(static_cast<int>(kept.back().size()));
    }
    std::map<int, QMatrix> diffs;
    for (int deg = 1; deg <= total.max_degree(); ++deg) {
        QMatrix full = total.diff(deg);
        QMatrix d(dims[deg - 1], dims[deg]);
        for (int c = 0; c < dims[deg]; ++c)
            for (int r = 0; r < dims[deg - 1]; ++r)
                d.at(r, c) = full.at(kept[deg - 1][r], kept[deg][c]);
        diffs[deg] = std::move(d);
    }
    ChainComplex rel(0, std::move(dims), std::move(diffs));
    ComplexReport cr = verify_complex(rel);
    if (!cr.ok) fail_domain("relative twisted complex fails d*d=0: " + cr.message);
    return rel;
}

}  // namespace qhom
