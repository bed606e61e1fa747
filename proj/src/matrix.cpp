#include "matrix.hpp"

namespace qhom {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    QMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) fail_domain("ragged matrix rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

bool QMatrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

bool QMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    return *this == identity(rows_);
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

QMatrix QMatrix::operator-() const {
    QMatrix m = *this;
    for (auto& x : m.e_) x = -x;
    return m;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail_domain("matrix shape mismatch in +");
    QMatrix m = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] += o.e_[k];
    return m;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail_domain("matrix shape mismatch in -");
    QMatrix m = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] -= o.e_[k];
    return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) fail_domain("matrix shape mismatch in *");
    QMatrix m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) m.at(i, j) += a * o.at(k, j);
        }
    return m;
}

QMatrix QMatrix::scaled(const Rational& s) const {
    QMatrix m = *this;
    for (auto& x : m.e_) x *= s;
    return m;
}

std::vector<Rational> QMatrix::column(int c) const {
    std::vector<Rational> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = at(i, c);
    return v;
}

void QMatrix::set_column(int c, const std::vector<Rational>& v) {
    if (static_cast<int>(v.size()) != rows_) fail_domain("column length mismatch");
    for (int i = 0; i < rows_; ++i) at(i, c) = v[i];
}

QMatrix QMatrix::columns(const std::vector<int>& idx) const {
    QMatrix m(rows_, static_cast<int>(idx.size()));
    for (int j = 0; j < static_cast<int>(idx.size()); ++j)
        for (int i = 0; i < rows_; ++i) m.at(i, j) = at(i, idx[j]);
    return m;
}

QMatrix QMatrix::hcat(const QMatrix& o) const {
    if (rows_ != o.rows_) fail_domain("hcat row mismatch");
    QMatrix m(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) m.at(i, cols_ + j) = o.at(i, j);
    }
    return m;
}

QMatrix QMatrix::vcat(const QMatrix& o) const {
    if (cols_ != o.cols_) fail_domain("vcat column mismatch");
    QMatrix m(rows_ + o.rows_, cols_);
    for (int j = 0; j < cols_; ++j) {
        for (int i = 0; i < rows_; ++i) m.at(i, j) = at(i, j);
        for (int i = 0; i < o.rows_; ++i) m.at(rows_ + i, j) = o.at(i, j);
    }
    return m;
}

std::vector<Rational> QMatrix::apply(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != cols_) fail_domain("vector length mismatch in apply");
    std::vector<Rational> out(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero()) out[i] += at(i, j) * v[j];
    return out;
}

RrefResult rref(const QMatrix& m) {
    RrefResult res;
    res.reduced = m;
    QMatrix& a = res.reduced;
    int r = 0;
    for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < a.rows(); ++i)
            if (!a.at(i, c).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
        Rational inv = a.at(r, c).inverse();
        for (int j = c; j < a.cols(); ++j) a.at(r, j) *= inv;
        for (int i = 0; i < a.rows(); ++i) {
            if (i == r || a.at(i, c).is_zero()) continue;
            Rational f = a.at(i, c);
            for (int j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
        }
        res.pivot_columns.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

int rank(const QMatrix& m) {
    return rref(m).rank;
}

std::vector<std::vector<Rational>> kernel_basis(const QMatrix& m) {
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : rr.pivot_columns) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        std::vector<Rational> v(m.cols());
        v[c] = Rational(1);
        for (int p = 0; p < rr.rank; ++p) v[rr.pivot_columns[p]] = -rr.reduced.at(p, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

QMatrix kernel_matrix(const QMatrix& m) {
    auto basis = kernel_basis(m);
    QMatrix k(m.cols(), static_cast<int>(basis.size()));
    for (int j = 0; j < static_cast<int>(basis.size()); ++j) k.set_column(j, basis[j]);
    return k;
}

std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != m.rows()) fail_domain("solve: rhs length mismatch");
    QMatrix rhs(m.rows(), 1);
    rhs.set_column(0, b);
    auto x = solve_matrix(m, rhs);
    if (!x) return std::nullopt;
    return x->column(0);
}

std::optional<QMatrix> solve_matrix(const QMatrix& m, const QMatrix& b) {
    if (b.rows() != m.rows()) fail_domain("solve: rhs shape mismatch");
    RrefResult rr = rref(m.hcat(b));
    // Any pivot in the rhs block means some column is inconsistent.
    for (int c : rr.pivot_columns)
        if (c >= m.cols()) return std::nullopt;
    QMatrix x(m.cols(), b.cols());
    for (int p = 0; p < rr.rank; ++p)
        for (int j = 0; j < b.cols(); ++j)
            x.at(rr.pivot_columns[p], j) = rr.reduced.at(p, m.cols() + j);
    return x;
}

Rational determinant(const QMatrix& m) {
    if (m.rows() != m.cols()) fail_domain("determinant of non-square matrix");
    int n = m.rows();
    QMatrix a = m;
    Rational det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (!a.at(i, c).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(c, j));
            det = -det;
        }
        det *= a.at(c, c);
        Rational inv = a.at(c, c).inverse();
        for (int i = c + 1; i < n; ++i) {
            if (a.at(i, c).is_zero()) continue;
            Rational f = a.at(i, c) * inv;
            for (int j = c; j < n; ++j) a.at(i, j) -= f * a.at(c, j);
        }
    }
    return det;
}

bool is_invertible(const QMatrix& m) {
    return m.rows() == m.cols() && !determinant(m).is_zero();
}

QMatrix inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) fail_domain("inverse of non-square matrix");
    auto x = solve_matrix(m, QMatrix::identity(m.rows()));
    if (!x) fail_domain("inverse of singular matrix");
    return *x;
}

QMatrix block_diag(const QMatrix& a, const QMatrix& b) {
    QMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return m;
}

}  // namespace qhom
