#include "chain.hpp"

#include <algorithm>

namespace qhom {

namespace {

int sign_of_degree(int n) {
    return n % 2 == 0 ? 1 : -1;
}

}  // namespace

ChainComplex::ChainComplex(int min_degree, std::vector<int> dims,
                           std::map<int, QMatrix> differentials)
    : min_degree_(min_degree), dims_(std::move(dims)) {
    for (int d : dims_)
        if (d < 0) fail_domain("negative dimension in chain complex");
    for (auto& [n, m] : differentials) {
        if (m.rows() != dim(n - 1) || m.cols() != dim(n))
            fail_domain("differential at degree " + std::to_string(n) +
                        " has shape mismatch with dims");
        if (!m.empty_shape()) d_[n] = std::move(m);
    }
}

int ChainComplex::dim(int n) const {
    int k = n - min_degree_;
    if (k < 0 || k >= static_cast<int>(dims_.size())) return 0;
    return dims_[k];
}

int ChainComplex::total_dim() const {
    int t = 0;
    for (int d : dims_) t += d;
    return t;
}

QMatrix ChainComplex::diff(int n) const {
    auto it = d_.find(n);
    if (it != d_.end()) return it->second;
    return QMatrix(dim(n - 1), dim(n));
}

bool operator==(const ChainComplex& a, const ChainComplex& b) {
    int lo = std::min(a.min_degree(), b.min_degree());
    int hi = std::max(a.max_degree(), b.max_degree());
    for (int n = lo; n <= hi + 1; ++n) {
        if (a.dim(n) != b.dim(n)) return false;
        if (a.diff(n) != b.diff(n)) return false;
    }
    return true;
}

ChainMap::ChainMap(ChainComplex source, ChainComplex target, std::map<int, QMatrix> components)
    : source_(std::move(source)), target_(std::move(target)) {
    for (auto& [n, m] : components) {
        if (m.rows() != target_.dim(n) || m.cols() != source_.dim(n))
            fail_domain("chain map component at degree " + std::to_string(n) +
                        " has wrong shape");
        if (!m.empty_shape()) comps_[n] = std::move(m);
    }
}

ChainMap ChainMap::identity(const ChainComplex& c) {
    std::map<int, QMatrix> comps;
    for (int n = c.min_degree(); n <= c.max_degree(); ++n)
        if (c.dim(n) > 0) comps[n] = QMatrix::identity(c.dim(n));
    return ChainMap(c, c, std::move(comps));
}

ChainMap ChainMap::zero(const ChainComplex& source, const ChainComplex& target) {
    return ChainMap(source, target, {});
}

ChainMap ChainMap::diagonal(const ChainComplex& source, const ChainComplex& target,
                            const Rational& scalar) {
    std::map<int, QMatrix> comps;
    int lo = std::min(source.min_degree(), target.min_degree());
    int hi = std::max(source.max_degree(), target.max_degree());
    for (int n = lo; n <= hi; ++n) {
        if (source.dim(n) == 0 && target.dim(n) == 0) continue;
        if (source.dim(n) != target.dim(n))
            fail_domain("diagonal map needs equal dimensions in degree " + std::to_string(n));
        comps[n] = QMatrix::identity(source.dim(n)).scaled(scalar);
    }
    return ChainMap(source, target, std::move(comps));
}

QMatrix ChainMap::component(int n) const {
    auto it = comps_.find(n);
    if (it != comps_.end()) return it->second;
    return QMatrix(target_.dim(n), source_.dim(n));
}

bool ChainMap::is_chain_map() const {
    int lo = std::min(source_.min_degree(), target_.min_degree());
    int hi = std::max(source_.max_degree(), target_.max_degree());
    for (int n = lo; n <= hi + 1; ++n) {
        if (target_.diff(n) * component(n) != component(n - 1) * source_.diff(n)) return false;
    }
    return true;
}

void ChainMap::require_chain_map(const std::string& what) const {
    if (!is_chain_map()) fail_domain(what + " is not a chain map");
}

ChainMap ChainMap::compose(const ChainMap& inner) const {
    if (!(inner.target_ == source_)) fail_domain("compose: middle complexes differ");
    std::map<int, QMatrix> comps;
    int lo = std::min(inner.source_.min_degree(), target_.min_degree());
    int hi = std::max(inner.source_.max_degree(), target_.max_degree());
    for (int n = lo; n <= hi; ++n) {
        if (inner.source_.dim(n) == 0 || target_.dim(n) == 0) continue;
        comps[n] = component(n) * inner.component(n);
    }
    return ChainMap(inner.source_, target_, std::move(comps));
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
    if (!(source_ == o.source_) || !(target_ == o.target_))
        fail_domain("chain map sum: endpoint mismatch");
    std::map<int, QMatrix> comps;
    int lo = std::min(source_.min_degree(), target_.min_degree());
    int hi = std::max(source_.max_degree(), target_.max_degree());
    for (int n = lo; n <= hi; ++n)
        if (source_.dim(n) > 0 && target_.dim(n) > 0) comps[n] = component(n) + o.component(n);
    return ChainMap(source_, target_, std::move(comps));
}

ChainMap ChainMap::operator-(const ChainMap& o) const {
    if (!(source_ == o.source_) || !(target_ == o.target_))
        fail_domain("chain map difference: endpoint mismatch");
    std::map<int, QMatrix> comps;
    int lo = std::min(source_.min_degree(), target_.min_degree());
    int hi = std::max(source_.max_degree(), target_.max_degree());
    for (int n = lo; n <= hi; ++n)
        if (source_.dim(n) > 0 && target_.dim(n) > 0) comps[n] = component(n) - o.component(n);
    return ChainMap(source_, target_, std::move(comps));
}

bool operator==(const ChainMap& a, const ChainMap& b) {
    if (!(a.source_ == b.source_) || !(a.target_ == b.target_)) return false;
    int lo = std::min(a.source_.min_degree(), a.target_.min_degree());
    int hi = std::max(a.source_.max_degree(), a.target_.max_degree());
    for (int n = lo; n <= hi; ++n)
        if (a.component(n) != b.component(n)) return false;
    return true;
}

ChainHomotopy::ChainHomotopy(ChainMap f0, ChainMap f1, std::map<int, QMatrix> components)
    : f0_(std::move(f0)), f1_(std::move(f1)) {
    if (!(f0_.source() == f1_.source()) || !(f0_.target() == f1_.target()))
        fail_domain("homotopy endpoints have mismatched sources or targets");
    for (auto& [n, m] : components) {
        if (m.rows() != f0_.target().dim(n + 1) || m.cols() != f0_.source().dim(n))
            fail_domain("homotopy component at degree " + std::to_string(n) + " has wrong shape");
        if (!m.empty_shape()) comps_[n] = std::move(m);
    }
}

QMatrix ChainHomotopy::component(int n) const {
    auto it = comps_.find(n);
    if (it != comps_.end()) return it->second;
    return QMatrix(f0_.target().dim(n + 1), f0_.source().dim(n));
}

bool ChainHomotopy::is_valid() const {
    const ChainComplex& a = f0_.source();
    const ChainComplex& b = f0_.target();
    int lo = std::min(a.min_degree(), b.min_degree()) - 1;
    int hi = std::max(a.max_degree(), b.max_degree()) + 1;
    for (int n = lo; n <= hi; ++n) {
        QMatrix lhs = b.diff(n + 1) * component(n) + component(n - 1) * a.diff(n);
        if (lhs != f1_.component(n) - f0_.component(n)) return false;
    }
    return true;
}

ComplexReport verify_complex(const ChainComplex& c) {
    for (int n = c.min_degree() + 1; n <= c.max_degree(); ++n) {
        QMatrix sq = c.diff(n) * c.diff(n + 1);
        for (int i = 0; i < sq.rows(); ++i)
            for (int j = 0; j < sq.cols(); ++j)
                if (!sq.at(i, j).is_zero())
                    return {false, n + 1, i, j,
                            "d*d nonzero at degree " + std::to_string(n + 1) + ", entry (" +
                                std::to_string(i) + "," + std::to_string(j) + ") = " +
                                sq.at(i, j).str()};
    }
    return {};
}

int HomologyData::betti_at(int n) const {
    int k = n - min_degree;
    if (k < 0 || k >= static_cast<int>(betti.size())) return 0;
    return betti[k];
}

HomologyData homology(const ChainComplex& c) {
    HomologyData h;
    h.min_degree = c.min_degree();
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
        QMatrix cycles = kernel_matrix(c.diff(n));
        QMatrix bdry = c.diff(n + 1);
        RrefResult rb = rref(bdry);
        QMatrix image = bdry.columns(rb.pivot_columns);
        // Representatives: kernel columns completing the image, leftmost first.
        RrefResult rr = rref(image.hcat(cycles));
        std::vector<int> rep_cols;
        for (int p : rr.pivot_columns)
            if (p >= image.cols()) rep_cols.push_back(p - image.cols());
        h.betti.push_back(static_cast<int>(rep_cols.size()));
        h.representatives.push_back(cycles.columns(rep_cols));
    }
    return h;
}

long long euler_characteristic(const ChainComplex& c) {
    long long chi = 0;
    for (int n = c.min_degree(); n <= c.max_degree(); ++n)
        chi += static_cast<long long>(sign_of_degree(n)) * c.dim(n);
    return chi;
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    int lo = std::min(a.min_degree(), b.min_degree());
    int hi = std::max(a.max_degree(), b.max_degree());
    std::vector<int> dims;
    std::map<int, QMatrix> diffs;
    for (int n = lo; n <= hi; ++n) dims.push_back(a.dim(n) + b.dim(n));
    for (int n = lo; n <= hi + 1; ++n) diffs[n] = block_diag(a.diff(n), b.diff(n));
    return ChainComplex(lo, std::move(dims), std::move(diffs));
}

namespace {

// Offset of the (p, i, j) block element inside the degree-n piece of a tensor.
struct TensorLayout {
    const ChainComplex& a;
    const ChainComplex& b;

    int dim(int n) const {
        int t = 0;
        for (int p = a.min_degree(); p <= a.max_degree(); ++p) t += a.dim(p) * b.dim(n - p);
        return t;
    }

    int index(int n, int p, int i, int j) const {
        int off = 0;
        for (int q = a.min_degree(); q < p; ++q) off += a.dim(q) * b.dim(n - q);
        return off + i * b.dim(n - p) + j;
    }
};

}  // namespace

ChainComplex tensor_product(const ChainComplex& a, const ChainComplex& b) {
    if (a.is_empty() || b.is_empty()) return ChainComplex();
    TensorLayout lay{a, b};
    int lo = a.min_degree() + b.min_degree();
    int hi = a.max_degree() + b.max_degree();
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n) dims.push_back(lay.dim(n));
    std::map<int, QMatrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        QMatrix d(lay.dim(n - 1), lay.dim(n));
        for (int p = a.min_degree(); p <= a.max_degree(); ++p) {
            int q = n - p;
            if (a.dim(p) == 0 || b.dim(q) == 0) continue;
            QMatrix da = a.diff(p);
            QMatrix db = b.diff(q);
            Rational koszul(sign_of_degree(p));
            for (int i = 0; i < a.dim(p); ++i)
                for (int j = 0; j < b.dim(q); ++j) {
                    int col = lay.index(n, p, i, j);
                    for (int r = 0; r < a.dim(p - 1); ++r)
                        if (!da.at(r, i).is_zero())
                            d.at(lay.index(n - 1, p - 1, r, j), col) += da.at(r, i);
                    for (int s = 0; s < b.dim(q - 1); ++s)
                        if (!db.at(s, j).is_zero())
                            d.at(lay.index(n - 1, p, i, s), col) += koszul * db.at(s, j);
                }
        }
        diffs[n] = std::move(d);
    }
    ChainComplex t(lo, std::move(dims), std::move(diffs));
    ComplexReport rep = verify_complex(t);
    if (!rep.ok) fail_domain("tensor product differential fails d*d=0: " + rep.message);
    return t;
}

namespace {

// Shared layout for cylinder and cone fibers: degree-n blocks in the order
// (A_n, A_{n-1}, B_n); the cone drops the first block.
struct CylLayout {
    const ChainComplex& a;
    const ChainComplex& b;
    bool with_a0;  // include the A_n block (cylinder) or not (cone)

    int dim(int n) const { return (with_a0 ? a.dim(n) : 0) + a.dim(n - 1) + b.dim(n); }
    int off_a0(int) const { return 0; }
    int off_a1(int n) const { return with_a0 ? a.dim(n) : 0; }
    int off_b(int n) const { return off_a1(n) + a.dim(n - 1); }
};

ChainComplex build_cylinder_like(const ChainMap& f, bool with_a0) {
    const ChainComplex& a = f.source();
    const ChainComplex& b = f.target();
    CylLayout lay{a, b, with_a0};
    int lo = std::min(a.min_degree(), b.min_degree());
    int hi = std::max(a.max_degree() + 1, b.max_degree());
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n) dims.push_back(lay.dim(n));
    std::map<int, QMatrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        QMatrix d(lay.dim(n - 1), lay.dim(n));
        QMatrix da = a.diff(n), da1 = a.diff(n - 1), db = b.diff(n);
        QMatrix fc = f.component(n - 1);
        if (with_a0) {
            for (int i = 0; i < a.dim(n); ++i)
                for (int r = 0; r < a.dim(n - 1); ++r)
                    if (!da.at(r, i).is_zero())
                        d.at(lay.off_a0(n - 1) + r, lay.off_a0(n) + i) += da.at(r, i);
        }
        for (int i = 0; i < a.dim(n - 1); ++i) {
            int col = lay.off_a1(n) + i;
            if (with_a0) d.at(lay.off_a0(n - 1) + i, col) += Rational(1);  // the "+a'" term
            for (int r = 0; r < a.dim(n - 2); ++r)
                if (!da1.at(r, i).is_zero()) d.at(lay.off_a1(n - 1) + r, col) -= da1.at(r, i);
            for (int r = 0; r < b.dim(n - 1); ++r)
                if (!fc.at(r, i).is_zero()) d.at(lay.off_b(n - 1) + r, col) -= fc.at(r, i);
        }
        for (int j = 0; j < b.dim(n); ++j)
            for (int r = 0; r < b.dim(n - 1); ++r)
                if (!db.at(r, j).is_zero())
                    d.at(lay.off_b(n - 1) + r, lay.off_b(n) + j) += db.at(r, j);
        diffs[n] = std::move(d);
    }
    ChainComplex c(lo, std::move(dims), std::move(diffs));
    ComplexReport rep = verify_complex(c);
    if (!rep.ok)
        fail_domain(std::string(with_a0 ? "cylinder" : "cone") + " fails d*d=0: " + rep.message);
    return c;
}

}  // namespace

CylinderData mapping_cylinder(const ChainMap& f) {
    f.require_chain_map("cylinder input");
    const ChainComplex& a = f.source();
    const ChainComplex& b = f.target();
    ChainComplex cyl = build_cylinder_like(f, true);
    CylLayout lay{a, b, true};

    std::map<int, QMatrix> j0c, j1c, pc;
    for (int n = cyl.min_degree(); n <= cyl.max_degree(); ++n) {
        if (a.dim(n) > 0) {
            QMatrix m(cyl.dim(n), a.dim(n));
            for (int i = 0; i < a.dim(n); ++i) m.at(lay.off_a0(n) + i, i) = Rational(1);
            j0c[n] = std::move(m);
        }
        if (b.dim(n) > 0) {
            QMatrix m(cyl.dim(n), b.dim(n));
            for (int i = 0; i < b.dim(n); ++i) m.at(lay.off_b(n) + i, i) = Rational(1);
            j1c[n] = std::move(m);
        }
        if (b.dim(n) > 0 && cyl.dim(n) > 0) {
            QMatrix m(b.dim(n), cyl.dim(n));
            QMatrix fc = f.component(n);
            for (int r = 0; r < b.dim(n); ++r) {
                for (int i = 0; i < a.dim(n); ++i) m.at(r, lay.off_a0(n) + i) = fc.at(r, i);
                m.at(r, lay.off_b(n) + r) = Rational(1);
            }
            pc[n] = std::move(m);
        }
    }
    CylinderData out{cyl, ChainMap(a, cyl, std::move(j0c)), ChainMap(b, cyl, std::move(j1c)),
                     ChainMap(cyl, b, std::move(pc))};
    out.j0.require_chain_map("cylinder j0");
    out.j1.require_chain_map("cylinder j1");
    out.proj.require_chain_map("cylinder projection");
    return out;
}

ChainComplex mapping_cone(const ChainMap& f) {
    f.require_chain_map("cone input");
    return build_cylinder_like(f, false);
}

ChainMap cylinder_factorization(const ChainMap& f, const ChainMap& g, const ChainMap& g_prime,
                                const ChainMap& f_prime, const std::map<int, QMatrix>& h) {
    const ChainComplex& a = f.source();
    const ChainComplex& b = f.target();
    const ChainComplex& a2 = g.target();
    const ChainComplex& b2 = g_prime.target();
    if (!(g.source() == a) || !(f_prime.source() == a2) || !(g_prime.source() == b) ||
        !(f_prime.target() == b2))
        fail_domain("factorization square has mismatched corners");
    for (const ChainMap* m : {&f, &g, &g_prime, &f_prime}) m->require_chain_map("square edge");

    ChainMap fg = f_prime.compose(g);
    ChainMap gf = g_prime.compose(f);
    auto h_at = [&](int n) {
        auto it = h.find(n);
        if (it != h.end()) return it->second;
        return QMatrix(b2.dim(n + 1), a.dim(n));
    };
    int lo = std::min(a.min_degree(), b2.min_degree()) - 1;
    int hi = std::max(a.max_degree(), b2.max_degree()) + 1;
    for (int n = lo; n <= hi; ++n) {
        QMatrix lhs = b2.diff(n + 1) * h_at(n) + h_at(n - 1) * a.diff(n);
        if (lhs != fg.component(n) - gf.component(n))
            fail_domain("homotopy condition dh + hd = f'g - g'f fails at degree " +
                        std::to_string(n));
    }

    CylinderData cd = mapping_cylinder(f);
    CylLayout lay{a, b, true};
    std::map<int, QMatrix> comps;
    for (int n = cd.cyl.min_degree(); n <= cd.cyl.max_degree(); ++n) {
        if (cd.cyl.dim(n) == 0 || b2.dim(n) == 0) continue;
        QMatrix m(b2.dim(n), cd.cyl.dim(n));
        QMatrix m_fg = fg.component(n);
        QMatrix m_h = h_at(n - 1);
        QMatrix m_gp = g_prime.component(n);
        for (int r = 0; r < b2.dim(n); ++r) {
            for (int i = 0; i < a.dim(n); ++i) m.at(r, lay.off_a0(n) + i) = m_fg.at(r, i);
            for (int i = 0; i < a.dim(n - 1); ++i) m.at(r, lay.off_a1(n) + i) = m_h.at(r, i);
            for (int i = 0; i < b.dim(n); ++i) m.at(r, lay.off_b(n) + i) = m_gp.at(r, i);
        }
        comps[n] = std::move(m);
    }
    ChainMap out(cd.cyl, b2, std::move(comps));
    out.require_chain_map("cylinder factorization");
    return out;
}

namespace {

// Layout for vectorized degree-shift maps between two complexes: one block of
// unknowns per degree n, each block a row-major matrix tgt.dim(n+shift) x src.dim(n).
struct MapVarLayout {
    std::vector<int> degrees;
    std::vector<int> offsets;
    std::vector<std::pair<int, int>> shapes;  // rows, cols per degree block
    int total = 0;

    void add(int n, int rows, int cols) {
        if (rows == 0 || cols == 0) return;
        degrees.push_back(n);
        offsets.push_back(total);
        shapes.emplace_back(rows, cols);
        total += rows * cols;
    }

    int find(int n) const {
        for (std::size_t k = 0; k < degrees.size(); ++k)
            if (degrees[k] == n) return static_cast<int>(k);
        return -1;
    }

    int pos(int blk, int r, int c) const { return offsets[blk] + r * shapes[blk].second + c; }
};

}  // namespace

std::optional<ChainHomotopy> find_homotopy(const ChainMap& f0, const ChainMap& f1) {
    if (!(f0.source() == f1.source()) || !(f0.target() == f1.target()))
        fail_domain("find_homotopy: endpoint mismatch");
    const ChainComplex& a = f0.source();
    const ChainComplex& b = f0.target();
    int lo = std::min(a.min_degree(), b.min_degree()) - 1;
    int hi = std::max(a.max_degree(), b.max_degree()) + 1;

    MapVarLayout vars;
    for (int n = lo; n <= hi; ++n) vars.add(n, b.dim(n + 1), a.dim(n));

    MapVarLayout eqs;
    for (int n = lo; n <= hi; ++n) eqs.add(n, b.dim(n), a.dim(n));

    QMatrix sys(eqs.total, vars.total);
    std::vector<Rational> rhs(eqs.total);
    for (std::size_t e = 0; e < eqs.degrees.size(); ++e) {
        int n = eqs.degrees[e];
        QMatrix g = f1.component(n) - f0.component(n);
        QMatrix db = b.diff(n + 1);
        QMatrix da = a.diff(n);
        int vn = vars.find(n);
        int vp = vars.find(n - 1);
        for (int r = 0; r < b.dim(n); ++r)
            for (int c = 0; c < a.dim(n); ++c) {
                int row = eqs.pos(static_cast<int>(e), r, c);
                rhs[row] = g.at(r, c);
                if (vn >= 0)
                    for (int k = 0; k < b.dim(n + 1); ++k)
                        if (!db.at(r, k).is_zero())
                            sys.at(row, vars.pos(vn, k, c)) += db.at(r, k);
                if (vp >= 0)
                    for (int m = 0; m < a.dim(n - 1); ++m)
                        if (!da.at(m, c).is_zero())
                            sys.at(row, vars.pos(vp, r, m)) += da.at(m, c);
            }
    }
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    std::map<int, QMatrix> comps;
    for (std::size_t k = 0; k < vars.degrees.size(); ++k) {
        int n = vars.degrees[k];
        QMatrix m(vars.shapes[k].first, vars.shapes[k].second);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) m.at(r, c) = (*sol)[vars.pos(static_cast<int>(k), r, c)];
        comps[n] = std::move(m);
    }
    return ChainHomotopy(f0, f1, std::move(comps));
}

std::vector<std::array<int, 3>> hom_basis(const ChainComplex& a, const ChainComplex& b, int k) {
    std::vector<std::array<int, 3>> basis;
    for (int n = a.min_degree(); n <= a.max_degree(); ++n) {
        if (a.dim(n) == 0 || b.dim(n + k) == 0) continue;
        for (int i = 0; i < b.dim(n + k); ++i)
            for (int j = 0; j < a.dim(n); ++j) basis.push_back({n, i, j});
    }
    return basis;
}

ChainComplex hom_complex(const ChainComplex& a, const ChainComplex& b) {
    if (a.is_empty() || b.is_empty()) return ChainComplex();
    int lo = b.min_degree() - a.max_degree();
    int hi = b.max_degree() - a.min_degree();
    std::vector<std::vector<std::array<int, 3>>> bases;
    for (int k = lo; k <= hi; ++k) bases.push_back(hom_basis(a, b, k));

    auto index_in = [&](int k, int n, int i, int j) -> int {
        const auto& basis = bases[k - lo];
        for (std::size_t t = 0; t < basis.size(); ++t)
            if (basis[t][0] == n && basis[t][1] == i && basis[t][2] == j)
                return static_cast<int>(t);
        return -1;
    };

    std::vector<int> dims;
    for (int k = lo; k <= hi; ++k) dims.push_back(static_cast<int>(bases[k - lo].size()));
    std::map<int, QMatrix> diffs;
    for (int k = lo + 1; k <= hi; ++k) {
        const auto& basis = bases[k - lo];
        int tgt_dim = dims[k - 1 - lo];
        QMatrix d(tgt_dim, static_cast<int>(basis.size()));
        Rational sgn(sign_of_degree(k));
        for (std::size_t t = 0; t < basis.size(); ++t) {
            auto [n, i, j] = basis[t];
            QMatrix db = b.diff(n + k);
            for (int r = 0; r < b.dim(n + k - 1); ++r) {
                if (db.at(r, i).is_zero()) continue;
                int row = index_in(k - 1, n, r, j);
                if (row >= 0) d.at(row, static_cast<int>(t)) += db.at(r, i);
            }
            QMatrix da = a.diff(n + 1);
            for (int c = 0; c < a.dim(n + 1); ++c) {
                if (da.at(j, c).is_zero()) continue;
                int row = index_in(k - 1, n + 1, i, c);
                if (row >= 0) d.at(row, static_cast<int>(t)) -= sgn * da.at(j, c);
            }
        }
        diffs[k] = std::move(d);
    }
    ChainComplex h(lo, std::move(dims), std::move(diffs));
    ComplexReport rep = verify_complex(h);
    if (!rep.ok) fail_domain("hom complex fails d*d=0: " + rep.message);
    return h;
}

ObstructionResult secondary_obstruction(const ChainMap& f0, const ChainMap& f1,
                                        const ChainHomotopy& h0, const ChainHomotopy& h1) {
    for (const ChainHomotopy* h : {&h0, &h1}) {
        if (!(h->f0() == f0) || !(h->f1() == f1) || !h->is_valid())
            fail_domain("secondary_obstruction: input is not a homotopy between the given maps");
    }
    const ChainComplex& a = f0.source();
    const ChainComplex& b = f0.target();
    ChainComplex hom = hom_complex(a, b);

    auto basis1 = hom_basis(a, b, 1);
    std::vector<Rational> cycle(basis1.size());
    for (std::size_t t = 0; t < basis1.size(); ++t) {
        auto [n, i, j] = basis1[t];
        cycle[t] = h1.component(n).at(i, j) - h0.component(n).at(i, j);
    }

    ObstructionResult out;
    if (basis1.empty()) {
        out.is_zero = true;
        out.witness = std::map<int, QMatrix>{};
        return out;
    }

    // Split the degree-1 cycle into homology representatives plus a boundary.
    HomologyData hh = homology(hom);
    QMatrix reps = hh.representatives[1 - hom.min_degree()];
    QMatrix d2 = hom.diff(2);
    auto coeffs = solve(reps.hcat(d2), cycle);
    if (!coeffs) fail_domain("secondary_obstruction: difference of homotopies is not a cycle");
    out.class_vector.assign(coeffs->begin(), coeffs->begin() + reps.cols());
    out.is_zero = true;
    for (const auto& x : out.class_vector)
        if (!x.is_zero()) out.is_zero = false;

    if (out.is_zero) {
        auto phi_vec = solve(d2, cycle);
        if (!phi_vec) fail_domain("secondary_obstruction: vanishing class without witness");
        auto basis2 = hom_basis(a, b, 2);
        std::map<int, QMatrix> phi;
        for (int n = a.min_degree(); n <= a.max_degree(); ++n)
            if (a.dim(n) > 0 && b.dim(n + 2) > 0) phi[n] = QMatrix(b.dim(n + 2), a.dim(n));
        for (std::size_t t = 0; t < basis2.size(); ++t) {
            auto [n, i, j] = basis2[t];
            phi[n].at(i, j) = (*phi_vec)[t];
        }
        out.witness = std::move(phi);
    }
    return out;
}

}  // namespace qhom
