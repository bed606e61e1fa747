#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace qhom {

// Bounded chain complex of finite-dimensional Q-vector spaces. Degrees run
// from min_degree upward; dim(n) is 0 outside the stored range and diff(n)
// is the boundary C_n -> C_{n-1}, of shape dim(n-1) x dim(n).
class ChainComplex {
  public:
    ChainComplex() : min_degree_(0) {}
    ChainComplex(int min_degree, std::vector<int> dims, std::map<int, QMatrix> differentials);

    int min_degree() const { return min_degree_; }
    int max_degree() const { return min_degree_ + static_cast<int>(dims_.size()) - 1; }
    int dim(int n) const;
    const std::vector<int>& dims() const { return dims_; }
    int total_dim() const;
    bool is_empty() const { return total_dim() == 0; }

    QMatrix diff(int n) const;

    friend bool operator==(const ChainComplex& a, const ChainComplex& b);

  private:
    int min_degree_;
    std::vector<int> dims_;
    std::map<int, QMatrix> d_;  // only degrees with a nonempty shape
};

// Degree-0 map of complexes; components_[n] has shape target.dim(n) x source.dim(n).
class ChainMap {
  public:
    ChainMap() = default;
    ChainMap(ChainComplex source, ChainComplex target, std::map<int, QMatrix> components);

    static ChainMap identity(const ChainComplex& c);
    static ChainMap zero(const ChainComplex& source, const ChainComplex& target);
    // f given by the same matrix in every degree where both complexes live.
    static ChainMap diagonal(const ChainComplex& source, const ChainComplex& target,
                             const Rational& scalar);

    const ChainComplex& source() const { return source_; }
    const ChainComplex& target() const { return target_; }
    QMatrix component(int n) const;

    bool is_chain_map() const;
    void require_chain_map(const std::string& what) const;

    ChainMap compose(const ChainMap& inner) const;  // this after inner
    ChainMap operator+(const ChainMap& o) const;
    ChainMap operator-(const ChainMap& o) const;

    friend bool operator==(const ChainMap& a, const ChainMap& b);

  private:
    ChainComplex source_, target_;
    std::map<int, QMatrix> comps_;
};

// Degree +1 map h with dh + hd = f1 - f0 (that orientation throughout).
class ChainHomotopy {
  public:
    ChainHomotopy() = default;
    ChainHomotopy(ChainMap f0, ChainMap f1, std::map<int, QMatrix> components);

    const ChainMap& f0() const { return f0_; }
    const ChainMap& f1() const { return f1_; }
    QMatrix component(int n) const;  // source.dim(n) -> target.dim(n+1)

    bool is_valid() const;

  private:
    ChainMap f0_, f1_;
    std::map<int, QMatrix> comps_;
};

struct ComplexReport {
    bool ok = true;
    int degree = 0;
    int row = 0, col = 0;
    std::string message;
};

// Checks d(n-1) d(n) = 0 for every degree; reports the first failure.
ComplexReport verify_complex(const ChainComplex& c);

struct HomologyData {
    int min_degree = 0;
    std::vector<int> betti;
    // Columns of representatives[k] are cycles spanning a complement of the
    // image inside the kernel in degree min_degree + k.
    std::vector<QMatrix> representatives;

    int betti_at(int n) const;
};

HomologyData homology(const ChainComplex& c);

long long euler_characteristic(const ChainComplex& c);

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

// Graded tensor product with the Koszul rule d(x@y) = dx@y + (-1)^|x| x@dy.
// Degree-n basis order: ascending a-degree p, then a-index, then b-index.
ChainComplex tensor_product(const ChainComplex& a, const ChainComplex& b);

struct CylinderData {
    ChainComplex cyl;  // Cyl_n = A_n + A_{n-1} + B_n, in that basis order
    ChainMap j0;       // A -> Cyl, a -> (a,0,0)
    ChainMap j1;       // B -> Cyl, b -> (0,0,b)
    ChainMap proj;     // Cyl -> B, (a,a',b) -> f(a)+b
};

// d(a,a',b) = (da + a', -da', db - f(a')).
CylinderData mapping_cylinder(const ChainMap& f);

// Cone_n = A_{n-1} + B_n with d(a',b) = (-da', db - f(a')).
ChainComplex mapping_cone(const ChainMap& f);

// Given a square f' g = g' f commuting up to h (dh + hd = f'g - g'f),
// returns the map Cyl(f) -> B' sending (a,a',b) to f'g(a) + h(a') + g'(b).
// Rejects inputs whose h fails the homotopy condition, naming the degree.
ChainMap cylinder_factorization(const ChainMap& f, const ChainMap& g, const ChainMap& g_prime,
                                const ChainMap& f_prime, const std::map<int, QMatrix>& h);

// Solves dh + hd = f1 - f0 degree by degree; nullopt when inconsistent.
std::optional<ChainHomotopy> find_homotopy(const ChainMap& f0, const ChainMap& f1);

// The complex Hom(A,B) with Hom_k = sum_n Hom(A_n, B_{n+k}) and
// D(u) = d_B u - (-1)^k u d_A. Basis order: ascending n, then row-major.
ChainComplex hom_complex(const ChainComplex& a, const ChainComplex& b);

// Basis of Hom_k as (source degree n, target row i, source column j) triples,
// in the order used by hom_complex.
std::vector<std::array<int, 3>> hom_basis(const ChainComplex& a, const ChainComplex& b, int k);

struct ObstructionResult {
    // Coordinates of [h1 - h0] in the chosen basis of H_1(Hom(A,B)).
    std::vector<Rational> class_vector;
    bool is_zero = false;
    // When the class vanishes: degree-2 map Phi with d Phi - Phi d = h1 - h0.
    std::optional<std::map<int, QMatrix>> witness;
};

// The difference of two homotopies between the same pair of maps is a
// degree-1 cycle in Hom(A,B); returns its homology class and, when the class
// vanishes, a second-order homotopy witnessing that.
ObstructionResult secondary_obstruction(const ChainMap& f0, const ChainMap& f1,
                                        const ChainHomotopy& h0, const ChainHomotopy& h1);

}  // namespace qhom
