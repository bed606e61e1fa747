#pragma once

#include <optional>
#include <vector>

#include "rational.hpp"

namespace qhom {

// Dense matrix of exact rationals, row-major. All elimination routines pick
// pivots leftmost-first so identical inputs always yield identical outputs.
class QMatrix {
  public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {}

    static QMatrix identity(int n);
    static QMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty_shape() const { return rows_ == 0 || cols_ == 0; }

    const Rational& at(int r, int c) const { return e_[static_cast<std::size_t>(r) * cols_ + c]; }
    Rational& at(int r, int c) { return e_[static_cast<std::size_t>(r) * cols_ + c]; }

    bool is_zero() const;
    bool is_identity() const;

    QMatrix transpose() const;
    QMatrix operator-() const;
    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix scaled(const Rational& s) const;

    friend bool operator==(const QMatrix& a, const QMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const QMatrix& a, const QMatrix& b) { return !(a == b); }

    std::vector<Rational> column(int c) const;
    void set_column(int c, const std::vector<Rational>& v);
    QMatrix columns(const std::vector<int>& idx) const;

    // [this | o] side by side / stacked.
    QMatrix hcat(const QMatrix& o) const;
    QMatrix vcat(const QMatrix& o) const;

    std::vector<Rational> apply(const std::vector<Rational>& v) const;

  private:
    int rows_, cols_;
    std::vector<Rational> e_;
};

struct RrefResult {
    QMatrix reduced;
    std::vector<int> pivot_columns;
    int rank = 0;
};

// Unique reduced row-echelon form; pivot selection is leftmost-first.
RrefResult rref(const QMatrix& m);

int rank(const QMatrix& m);

// Basis of the null space. Free variables are enumerated by ascending column
// index, and each basis vector has a 1 in its free coordinate.
std::vector<std::vector<Rational>> kernel_basis(const QMatrix& m);
QMatrix kernel_matrix(const QMatrix& m);  // same basis, as columns

// One solution of m x = b with free variables set to 0, or nullopt.
std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b);

// Column-space counterpart: finds x with m x = b where b is a matrix of
// right-hand sides; nullopt if any column is inconsistent.
std::optional<QMatrix> solve_matrix(const QMatrix& m, const QMatrix& b);

Rational determinant(const QMatrix& m);

bool is_invertible(const QMatrix& m);
QMatrix inverse(const QMatrix& m);

QMatrix block_diag(const QMatrix& a, const QMatrix& b);

}  // namespace qhom
