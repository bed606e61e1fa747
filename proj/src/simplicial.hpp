#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"

namespace qhom {

// A possibly-degenerate simplex: a degeneracy word applied to a nondegenerate
// one. Words are kept in normal form (strictly decreasing s-indices), so two
// elements are equal iff their encodings are.
struct SimplexElement {
    std::vector<int> word;
    std::string base;

    bool degenerate() const { return !word.empty(); }
    friend bool operator==(const SimplexElement& a, const SimplexElement& b) {
        return a.word == b.word && a.base == b.base;
    }
};

struct FaceTarget {
    std::vector<int> degen;
    std::string target;
};

struct SimplexEntry {
    std::string id;
    std::vector<FaceTarget> faces;  // d_0 .. d_dim
};

struct SimplicialReport {
    bool ok = true;
    std::string message;
};

// Finite simplicial set with a single 0-simplex, encoded by its nondegenerate
// simplices and their faces. Degenerate simplices exist only as face targets.
class ReducedSimplicialSet {
  public:
    ReducedSimplicialSet() = default;

    // Dimension-indexed lists of simplices; structural validation (a unique
    // vertex, well-formed face tables) happens here, the simplicial
    // identities are checked separately by verify().
    explicit ReducedSimplicialSet(std::vector<std::vector<SimplexEntry>> by_dim);

    int top_dim() const { return static_cast<int>(by_dim_.size()) - 1; }
    int count(int dim) const;
    const SimplexEntry& simplex(int dim, int idx) const { return by_dim_[dim][idx]; }
    const std::string& basepoint() const { return by_dim_[0][0].id; }

    bool has(const std::string& id) const { return index_.count(id) > 0; }
    int dim_of(const std::string& id) const;
    int index_of(const std::string& id) const;

    int element_dim(const SimplexElement& el) const;

    // Face and degeneracy operators on arbitrary elements, via the simplicial
    // identities; results are in normal form.
    SimplexElement face(const SimplexElement& el, int i) const;
    SimplexElement degeneracy(const SimplexElement& el, int j) const;

    // Checks d_i d_j = d_{j-1} d_i for i < j on every nondegenerate simplex;
    // reports the offending (simplex, i, j) on failure.
    SimplicialReport verify() const;

    friend bool operator==(const ReducedSimplicialSet& a, const ReducedSimplicialSet& b);

  private:
    std::vector<std::vector<SimplexEntry>> by_dim_;
    std::map<std::string, std::pair<int, int>> index_;  // id -> (dim, index)
};

// Front i-face (vertices 0..i) and back (n-i)-face (vertices i..n) of a
// nondegenerate n-simplex, as possibly-degenerate elements.
SimplexElement front_face(const ReducedSimplicialSet& x, const std::string& id, int i);
SimplexElement back_face(const ReducedSimplicialSet& x, const std::string& id, int i);

// Chains of normalized nondegenerate simplices; degenerate faces contribute 0.
// Requires verify() to pass.
ChainComplex normalized_chains(const ReducedSimplicialSet& x);

// One term of an element of C' (x) C': coefficient on front (x) back.
struct DiagonalTerm {
    SimplexElement front;
    SimplexElement back;
    Rational coeff;
};

using SparseChain = std::vector<std::pair<std::string, Rational>>;

// Alexander-Whitney diagonal of a basis simplex; terms with a degenerate
// factor are dropped.
std::vector<DiagonalTerm> aw_diagonal(const ReducedSimplicialSet& x, const std::string& id);

// Linear extension over a chain concentrated in one dimension.
std::vector<DiagonalTerm> comultiplication(const ReducedSimplicialSet& x, const SparseChain& c);

// Subcomplex of a simplicial set, closed under faces, given by member flags.
class SubComplexInclusion {
  public:
    SubComplexInclusion(ReducedSimplicialSet ambient, std::vector<std::string> members);

    const ReducedSimplicialSet& ambient() const { return ambient_; }
    bool contains(const std::string& id) const { return members_.count(id) > 0; }

    // The subcomplex as a simplicial set of its own (it always contains the
    // basepoint, or is empty).
    ReducedSimplicialSet sub_set() const;

  private:
    ReducedSimplicialSet ambient_;
    std::map<std::string, bool> members_;
};

struct RelativeChains {
    ChainComplex complex;
    ChainMap quotient;  // ambient normalized chains -> relative chains
};

RelativeChains relative_chains(const SubComplexInclusion& pair);

}  // namespace qhom
