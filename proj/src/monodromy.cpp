#include "monodromy.hpp"

namespace qhom {

MonodromyRep::MonodromyRep(ReducedSimplicialSet base, GradedModule fiber)
    : base_(std::move(base)), fiber_(std::move(fiber)) {}

void MonodromyRep::set_action(const std::string& edge_id, QMatrix total_matrix) {
    if (base_.dim_of(edge_id) != 1) fail_domain("action must be attached to a 1-simplex");
    if (total_matrix.rows() != fiber_.total() || total_matrix.cols() != fiber_.total())
        fail_domain("action matrix for '" + edge_id + "' has wrong size");
    actions_[edge_id] = std::move(total_matrix);
}

QMatrix MonodromyRep::action(const std::string& edge_id) const {
    auto it = actions_.find(edge_id);
    if (it != actions_.end()) return it->second;
    return QMatrix::identity(fiber_.total());
}

QMatrix MonodromyRep::action(const SimplexElement& edge) const {
    if (edge.degenerate()) return QMatrix::identity(fiber_.total());
    return action(edge.base);
}

RepReport verify_rep(const MonodromyRep& rho) {
    const ReducedSimplicialSet& x = rho.base();
    const GradedModule& h = rho.fiber();
    for (const auto& [id, m] : rho.actions()) {
        if (!is_invertible(m)) return {false, "action on '" + id + "' is not invertible"};
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) {
                if (m.at(r, c).is_zero()) continue;
                int qr = 0, qc = 0;
                while (r >= h.offset(qr) + h.dim(qr)) ++qr;
                while (c >= h.offset(qc) + h.dim(qc)) ++qc;
                if (qr != qc)
                    return {false, "action on '" + id + "' is not block-diagonal by degree"};
            }
    }
    for (int s = 0; s < x.count(2); ++s) {
        SimplexElement el{{}, x.simplex(2, s).id};
        QMatrix lhs = rho.action(x.face(el, 1));
        QMatrix rhs = rho.action(x.face(el, 0)) * rho.action(x.face(el, 2));
        if (lhs != rhs)
            return {false, "relation rho(d1) = rho(d0) rho(d2) fails on '" + el.base + "'"};
    }
    return {};
}

namespace {

// Column basis of the span of the columns of m, leftmost-pivot choice.
QMatrix column_space_basis(const QMatrix& m) {
    RrefResult rr = rref(m);
    return m.columns(rr.pivot_columns);
}

}  // namespace

UnipotentResult is_unipotent(const MonodromyRep& rho) {
    RepReport rep = verify_rep(rho);
    if (!rep.ok) fail_domain("is_unipotent: " + rep.message);
    int total = rho.fiber().total();

    UnipotentResult out;
    QMatrix w = QMatrix::identity(total);
    out.filtration.push_back(w);
    while (true) {
        if (w.cols() == 0) {
            out.unipotent = true;
            return out;
        }
        QMatrix next(total, 0);
        for (const auto& [id, m] : rho.actions()) {
            (void)id;
            next = next.hcat((m - QMatrix::identity(total)) * w);
        }
        next = column_space_basis(next);
        if (next.cols() == w.cols()) {
            out.unipotent = false;
            out.witness = w;
            out.filtration.pop_back();  // the stable piece is a witness, not a step
            return out;
        }
        out.filtration.push_back(next);
        w = next;
    }
}

DegreeOneCochain degree_one_cochain(const MonodromyRep& rho) {
    RepReport rep = verify_rep(rho);
    if (!rep.ok) fail_domain("degree_one_cochain: " + rep.message);
    const ReducedSimplicialSet& x = rho.base();
    TwistingCochain phi(x, rho.fiber());
    QMatrix id = QMatrix::identity(rho.fiber().total());
    for (int s = 0; s < x.count(1); ++s) {
        const std::string& e = x.simplex(1, s).id;
        QMatrix v = rho.action(e) - id;
        if (!v.is_zero()) phi.set(e, EndElement::from_flat(rho.fiber(), 0, v));
    }
    DegreeOneCochain out{std::move(phi), x.count(2) > 0, {}};
    if (out.identity_checked) out.identity = verify_twisting(out.phi);
    return out;
}

FibrationData fibration_data(const MonodromyRep& rho,
                             const std::map<std::string, EndElement>& higher) {
    DegreeOneCochain d1 = degree_one_cochain(rho);
    TwistingCochain phi = d1.phi;
    for (const auto& [id, value] : higher) {
        if (rho.base().dim_of(id) < 2)
            fail_domain("higher twisting component on '" + id + "' must have dimension >= 2");
        phi.set(id, value);
    }
    ChainComplex t = twisted_tensor(phi);  // refuses if the identity fails
    return {std::move(phi), std::move(t)};
}

ChainComplex fibration_complex(const MonodromyRep& rho,
                               const std::map<std::string, EndElement>& higher) {
    return fibration_data(rho, higher).complex;
}

namespace {

// Per-degree restriction of a block-diagonal action to a graded subspace,
// and the induced quotient action; nullopt when the subspace is not
// invariant.
struct SplitRep {
    MonodromyRep sub;
    MonodromyRep quotient;
};

std::optional<SplitRep> split_rep(const MonodromyRep& rho,
                                  const std::map<int, QMatrix>& sub_bases) {
    const GradedModule& h = rho.fiber();
    GradedModule sub_mod, quo_mod;
    std::map<int, QMatrix> bases;  // per degree: [sub | complement], invertible
    for (int q = 0; q <= h.top(); ++q) {
        QMatrix s(h.dim(q), 0);
        auto it = sub_bases.find(q);
        if (it != sub_bases.end()) {
            s = it->second;
            if (s.rows() != h.dim(q)) fail_domain("subspace basis has wrong rows in degree " +
                                                  std::to_string(q));
            if (rank(s) != s.cols()) fail_domain("subspace basis is not independent");
        }
        // Complement via leftmost pivots of [s | I].
        RrefResult rr = rref(s.hcat(QMatrix::identity(h.dim(q))));
        std::vector<int> comp;
        for (int p : rr.pivot_columns)
            if (p >= s.cols()) comp.push_back(p - s.cols());
        QMatrix e(h.dim(q), static_cast<int>(comp.size()));
        for (int k = 0; k < e.cols(); ++k) e.at(comp[k], k) = Rational(1);
        bases[q] = s.hcat(e);
        sub_mod.dims.push_back(s.cols());
        quo_mod.dims.push_back(e.cols());
    }

    MonodromyRep sub(rho.base(), sub_mod);
    MonodromyRep quo(rho.base(), quo_mod);
    for (const auto& [id, m] : rho.actions()) {
        QMatrix sub_m(sub_mod.total(), sub_mod.total());
        QMatrix quo_m(quo_mod.total(), quo_mod.total());
        for (int q = 0; q <= h.top(); ++q) {
            if (h.dim(q) == 0) continue;
            // Extract the degree-q block and conjugate into the [sub | comp] basis.
            QMatrix blk(h.dim(q), h.dim(q));
            for (int r = 0; r < h.dim(q); ++r)
                for (int c = 0; c < h.dim(q); ++c)
                    blk.at(r, c) = m.at(h.offset(q) + r, h.offset(q) + c);
            QMatrix conj = inverse(bases[q]) * blk * bases[q];
            int sd = sub_mod.dim(q);
            for (int r = sd; r < h.dim(q); ++r)
                for (int c = 0; c < sd; ++c)
                    if (!conj.at(r, c).is_zero()) return std::nullopt;  // not invariant
            for (int r = 0; r < sd; ++r)
                for (int c = 0; c < sd; ++c)
                    sub_m.at(sub_mod.offset(q) + r, sub_mod.offset(q) + c) = conj.at(r, c);
            for (int r = sd; r < h.dim(q); ++r)
                for (int c = sd; c < h.dim(q); ++c)
                    quo_m.at(quo_mod.offset(q) + r - sd, quo_mod.offset(q) + c - sd) =
                        conj.at(r, c);
        }
        sub.set_action(id, std::move(sub_m));
        quo.set_action(id, std::move(quo_m));
    }
    return SplitRep{std::move(sub), std::move(quo)};
}

}  // namespace

SerreReport serre_closure_check(const MonodromyRep& rho, const std::map<int, QMatrix>& sub_bases) {
    RepReport rep = verify_rep(rho);
    if (!rep.ok) fail_domain("serre_closure_check: " + rep.message);
    auto split = split_rep(rho, sub_bases);
    if (!split) fail_domain("serre_closure_check: subspace is not invariant under the action");
    SerreReport out;
    out.sub_unipotent = is_unipotent(split->sub).unipotent;
    out.quotient_unipotent = is_unipotent(split->quotient).unipotent;
    out.total_unipotent = is_unipotent(rho).unipotent;
    out.consistent = out.total_unipotent == (out.sub_unipotent && out.quotient_unipotent);
    return out;
}

}  // namespace qhom
