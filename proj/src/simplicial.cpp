#include "simplicial.hpp"

#include <algorithm>

namespace qhom {

namespace {

// Insert s_a into a normal-form word using s_a s_j = s_{j+1} s_a for a <= j.
std::vector<int> word_insert(int a, const std::vector<int>& w, std::size_t from = 0) {
    std::vector<int> out(w.begin(), w.begin() + from);
    std::size_t k = from;
    int cur = a;
    while (k < w.size() && cur <= w[k]) {
        out.push_back(w[k] + 1);
        ++k;
    }
    out.push_back(cur);
    out.insert(out.end(), w.begin() + k, w.end());
    return out;
}

}  // namespace

ReducedSimplicialSet::ReducedSimplicialSet(std::vector<std::vector<SimplexEntry>> by_dim)
    : by_dim_(std::move(by_dim)) {
    while (!by_dim_.empty() && by_dim_.back().empty()) by_dim_.pop_back();
    if (by_dim_.empty() || by_dim_[0].size() != 1)
        fail_domain("reduced simplicial set needs exactly one 0-simplex");
    for (int d = 0; d <= top_dim(); ++d)
        for (int i = 0; i < count(d); ++i) {
            const SimplexEntry& s = by_dim_[d][i];
            if (s.id.empty()) fail_domain("simplex with empty id");
            if (index_.count(s.id)) fail_domain("duplicate simplex id '" + s.id + "'");
            index_[s.id] = {d, i};
        }
    if (count(0) != 1) fail_domain("reduced simplicial set needs exactly one 0-simplex");
    // Face tables: d+1 entries, each a valid normal-form word applied to an
    // existing simplex of the right dimension.
    for (int d = 1; d <= top_dim(); ++d)
        for (int i = 0; i < count(d); ++i) {
            const SimplexEntry& s = by_dim_[d][i];
            if (static_cast<int>(s.faces.size()) != d + 1)
                fail_domain("simplex '" + s.id + "' needs " + std::to_string(d + 1) + " faces");
            for (const FaceTarget& ft : s.faces) {
                auto it = index_.find(ft.target);
                if (it == index_.end())
                    fail_domain("face of '" + s.id + "' refers to unknown simplex '" + ft.target +
                                "'");
                int tdim = it->second.first;
                if (tdim + static_cast<int>(ft.degen.size()) != d - 1)
                    fail_domain("face of '" + s.id + "' has wrong total dimension");
                int cur = tdim;
                for (auto j = ft.degen.rbegin(); j != ft.degen.rend(); ++j) {
                    if (*j < 0 || *j > cur)
                        fail_domain("face of '" + s.id + "' has invalid degeneracy index");
                    ++cur;
                }
                for (std::size_t k = 0; k + 1 < ft.degen.size(); ++k)
                    if (ft.degen[k] <= ft.degen[k + 1])
                        fail_domain("face of '" + s.id + "' has non-normal degeneracy word");
            }
        }
}

int ReducedSimplicialSet::count(int dim) const {
    if (dim < 0 || dim > top_dim()) return 0;
    return static_cast<int>(by_dim_[dim].size());
}

int ReducedSimplicialSet::dim_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail_domain("unknown simplex '" + id + "'");
    return it->second.first;
}

int ReducedSimplicialSet::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail_domain("unknown simplex '" + id + "'");
    return it->second.second;
}

int ReducedSimplicialSet::element_dim(const SimplexElement& el) const {
    return dim_of(el.base) + static_cast<int>(el.word.size());
}

SimplexElement ReducedSimplicialSet::face(const SimplexElement& el, int i) const {
    int n = element_dim(el);
    if (i < 0 || i > n) fail_domain("face index out of range");
    if (el.word.empty()) {
        if (n == 0) fail_domain("0-simplex has no faces");
        const FaceTarget& ft = by_dim_[dim_of(el.base)][index_of(el.base)].faces[i];
        return {ft.degen, ft.target};
    }
    int j = el.word.front();
    SimplexElement inner{std::vector<int>(el.word.begin() + 1, el.word.end()), el.base};
    if (i == j || i == j + 1) return inner;
    if (i < j) {
        SimplexElement r = face(inner, i);
        return degeneracy(r, j - 1);
    }
    SimplexElement r = face(inner, i - 1);
    return degeneracy(r, j);
}

SimplexElement ReducedSimplicialSet::degeneracy(const SimplexElement& el, int j) const {
    int n = element_dim(el);
    if (j < 0 || j > n) fail_domain("degeneracy index out of range");
    return {word_insert(j, el.word), el.base};
}

SimplicialReport ReducedSimplicialSet::verify() const {
    for (int d = 2; d <= top_dim(); ++d)
        for (int s = 0; s < count(d); ++s) {
            SimplexElement el{{}, by_dim_[d][s].id};
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i) {
                    SimplexElement lhs = face(face(el, j), i);
                    SimplexElement rhs = face(face(el, i), j - 1);
                    if (!(lhs == rhs))
                        return {false, "simplicial identity d_" + std::to_string(i) + " d_" +
                                           std::to_string(j) + " fails on '" + el.base + "'"};
                }
        }
    return {};
}

bool operator==(const ReducedSimplicialSet& a, const ReducedSimplicialSet& b) {
    if (a.top_dim() != b.top_dim()) return false;
    for (int d = 0; d <= a.top_dim(); ++d) {
        if (a.count(d) != b.count(d)) return false;
        for (int i = 0; i < a.count(d); ++i) {
            const SimplexEntry& x = a.simplex(d, i);
            const SimplexEntry& y = b.simplex(d, i);
            if (x.id != y.id || x.faces.size() != y.faces.size()) return false;
            for (std::size_t k = 0; k < x.faces.size(); ++k)
                if (x.faces[k].degen != y.faces[k].degen || x.faces[k].target != y.faces[k].target)
                    return false;
        }
    }
    return true;
}

SimplexElement front_face(const ReducedSimplicialSet& x, const std::string& id, int i) {
    int n = x.dim_of(id);
    if (i < 0 || i > n) fail_domain("front face index out of range");
    SimplexElement el{{}, id};
    for (int m = n; m > i; --m) el = x.face(el, m);
    return el;
}

SimplexElement back_face(const ReducedSimplicialSet& x, const std::string& id, int i) {
    int n = x.dim_of(id);
    if (i < 0 || i > n) fail_domain("back face index out of range");
    SimplexElement el{{}, id};
    for (int k = 0; k < i; ++k) el = x.face(el, 0);
    return el;
}

ChainComplex normalized_chains(const ReducedSimplicialSet& x) {
    SimplicialReport rep = x.verify();
    if (!rep.ok) fail_domain("simplicial identities fail: " + rep.message);
    std::vector<int> dims;
    for (int d = 0; d <= x.top_dim(); ++d) dims.push_back(x.count(d));
    std::map<int, QMatrix> diffs;
    for (int d = 1; d <= x.top_dim(); ++d) {
        QMatrix m(x.count(d - 1), x.count(d));
        for (int s = 0; s < x.count(d); ++s) {
            SimplexElement el{{}, x.simplex(d, s).id};
            for (int i = 0; i <= d; ++i) {
                SimplexElement f = x.face(el, i);
                if (f.degenerate()) continue;
                Rational sign(i % 2 == 0 ? 1 : -1);
                m.at(x.index_of(f.base), s) += sign;
            }
        }
        diffs[d] = std::move(m);
    }
    ChainComplex c(0, std::move(dims), std::move(diffs));
    ComplexReport cr = verify_complex(c);
    if (!cr.ok) fail_domain("normalized chains fail d*d=0: " + cr.message);
    return c;
}

std::vector<DiagonalTerm> aw_diagonal(const ReducedSimplicialSet& x, const std::string& id) {
    int n = x.dim_of(id);
    std::vector<DiagonalTerm> terms;
    for (int i = 0; i <= n; ++i) {
        SimplexElement f = front_face(x, id, i);
        SimplexElement b = back_face(x, id, i);
        if (f.degenerate() || b.degenerate()) continue;
        terms.push_back({f, b, Rational(1)});
    }
    return terms;
}

std::vector<DiagonalTerm> comultiplication(const ReducedSimplicialSet& x, const SparseChain& c) {
    std::vector<DiagonalTerm> out;
    for (const auto& [id, coeff] : c) {
        if (coeff.is_zero()) continue;
        for (DiagonalTerm t : aw_diagonal(x, id)) {
            t.coeff *= coeff;
            out.push_back(std::move(t));
        }
    }
    return out;
}

SubComplexInclusion::SubComplexInclusion(ReducedSimplicialSet ambient,
                                         std::vector<std::string> members)
    : ambient_(std::move(ambient)) {
    for (const std::string& id : members) {
        if (!ambient_.has(id)) fail_domain("subcomplex member '" + id + "' not in ambient set");
        members_[id] = true;
    }
    // Closure under faces.
    for (const auto& [id, flag] : members_) {
        (void)flag;
        int d = ambient_.dim_of(id);
        SimplexElement el{{}, id};
        for (int i = 0; i <= d && d > 0; ++i) {
            SimplexElement f = ambient_.face(el, i);
            if (!members_.count(f.base))
                fail_domain("subcomplex not closed under faces: '" + id + "' has face '" + f.base +
                            "' outside");
        }
    }
}

ReducedSimplicialSet SubComplexInclusion::sub_set() const {
    std::vector<std::vector<SimplexEntry>> by_dim(ambient_.top_dim() + 1);
    for (int d = 0; d <= ambient_.top_dim(); ++d)
        for (int i = 0; i < ambient_.count(d); ++i)
            if (contains(ambient_.simplex(d, i).id)) by_dim[d].push_back(ambient_.simplex(d, i));
    if (by_dim[0].empty()) by_dim[0].push_back(ambient_.simplex(0, 0));
    return ReducedSimplicialSet(std::move(by_dim));
}

RelativeChains relative_chains(const SubComplexInclusion& pair) {
    const ReducedSimplicialSet& x = pair.ambient();
    ChainComplex ambient = normalized_chains(x);

    std::vector<std::vector<int>> kept(x.top_dim() + 1);
    for (int d = 0; d <= x.top_dim(); ++d)
        for (int i = 0; i < x.count(d); ++i)
            if (!pair.contains(x.simplex(d, i).id)) kept[d].push_back(i);

    std::vector<int> dims;
    for (int d = 0; d <= x.top_dim(); ++d) dims.push_back(static_cast<int>(kept[d].size()));

    std::map<int, QMatrix> proj;  // degree-wise projection ambient -> relative
    for (int d = 0; d <= x.top_dim(); ++d) {
        QMatrix p(dims[d], x.count(d));
        for (int r = 0; r < dims[d]; ++r) p.at(r, kept[d][r]) = Rational(1);
        proj[d] = std::move(p);
    }

    std::map<int, QMatrix> diffs;
    for (int d = 1; d <= x.top_dim(); ++d) {
        QMatrix amb = ambient.diff(d);
        QMatrix m(dims[d - 1], dims[d]);
        for (int c = 0; c < dims[d]; ++c)
            for (int r = 0; r < dims[d - 1]; ++r) m.at(r, c) = amb.at(kept[d - 1][r], kept[d][c]);
        diffs[d] = std::move(m);
    }
    ChainComplex rel(0, dims, std::move(diffs));
    ComplexReport cr = verify_complex(rel);
    if (!cr.ok) fail_domain("relative chains fail d*d=0: " + cr.message);
    ChainMap q(ambient, rel, std::move(proj));
    q.require_chain_map("relative quotient");
    return {std::move(rel), std::move(q)};
}

}  // namespace qhom
