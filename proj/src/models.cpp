#include "models.hpp"

#include <algorithm>

namespace qhom {
namespace models {

ReducedSimplicialSet circle() {
    std::vector<std::vector<SimplexEntry>> by_dim(2);
    by_dim[0].push_back({"pt", {}});
    by_dim[1].push_back({"e", {{{}, "pt"}, {{}, "pt"}}});
    return ReducedSimplicialSet(std::move(by_dim));
}

ReducedSimplicialSet sphere2() {
    std::vector<std::vector<SimplexEntry>> by_dim(3);
    by_dim[0].push_back({"pt", {}});
    by_dim[2].push_back({"s", {{{0}, "pt"}, {{0}, "pt"}, {{0}, "pt"}}});
    return ReducedSimplicialSet(std::move(by_dim));
}

namespace {

ReducedSimplicialSet one_vertex_surface(const FaceTarget& t1_d0, const FaceTarget& t1_d1,
                                        const FaceTarget& t1_d2, const FaceTarget& t2_d0,
                                        const FaceTarget& t2_d1, const FaceTarget& t2_d2) {
    std::vector<std::vector<SimplexEntry>> by_dim(3);
    by_dim[0].push_back({"pt", {}});
    for (const char* e : {"a", "b", "c"})
        by_dim[1].push_back({e, {{{}, "pt"}, {{}, "pt"}}});
    by_dim[2].push_back({"T1", {t1_d0, t1_d1, t1_d2}});
    by_dim[2].push_back({"T2", {t2_d0, t2_d1, t2_d2}});
    return ReducedSimplicialSet(std::move(by_dim));
}

}  // namespace

ReducedSimplicialSet torus() {
    // dT1 = b - c + a, dT2 = a - c + b.
    return one_vertex_surface({{}, "b"}, {{}, "c"}, {{}, "a"},
                              {{}, "a"}, {{}, "c"}, {{}, "b"});
}

ReducedSimplicialSet klein_bottle() {
    // dT1 = b - c + a, dT2 = c - b + a; over Z this has H_1 = Z + Z/2.
    return one_vertex_surface({{}, "b"}, {{}, "c"}, {{}, "a"},
                              {{}, "c"}, {{}, "b"}, {{}, "a"});
}

ChainComplex boundary_delta4_chains() {
    // k-simplices are the (k+1)-subsets of {0..4} for k <= 3, in
    // lexicographic order; d[v0..vk] = sum (-1)^i [v0..^vi..vk].
    std::vector<std::vector<std::vector<int>>> simplices(4);
    for (int mask = 1; mask < 32; ++mask) {
        std::vector<int> verts;
        for (int v = 0; v < 5; ++v)
            if (mask & (1 << v)) verts.push_back(v);
        int k = static_cast<int>(verts.size()) - 1;
        if (k >= 0 && k <= 3) simplices[k].push_back(verts);
    }
    for (auto& level : simplices) std::sort(level.begin(), level.end());

    auto find = [&](int k, const std::vector<int>& v) {
        for (std::size_t i = 0; i < simplices[k].size(); ++i)
            if (simplices[k][i] == v) return static_cast<int>(i);
        fail_domain("missing simplex in boundary_delta4");
        return -1;
    };

    std::vector<int> dims;
    for (const auto& level : simplices) dims.push_back(static_cast<int>(level.size()));
    std::map<int, QMatrix> diffs;
    for (int k = 1; k <= 3; ++k) {
        QMatrix m(dims[k - 1], dims[k]);
        for (std::size_t s = 0; s < simplices[k].size(); ++s) {
            for (int i = 0; i <= k; ++i) {
                std::vector<int> f = simplices[k][s];
                f.erase(f.begin() + i);
                Rational sign(i % 2 == 0 ? 1 : -1);
                m.at(find(k - 1, f), static_cast<int>(s)) += sign;
            }
        }
        diffs[k] = std::move(m);
    }
    ChainComplex c(0, std::move(dims), std::move(diffs));
    ComplexReport rep = verify_complex(c);
    if (!rep.ok) fail_domain("boundary_delta4 fails d*d=0: " + rep.message);
    return c;
}

ChainComplex circle_fiber_model() {
    std::map<int, QMatrix> diffs;
    QMatrix d1(2, 2);
    d1.at(1, 1) = Rational(1);  // d a1 = b0, d z1 = 0
    diffs[1] = d1;
    return ChainComplex(0, {2, 2}, std::move(diffs));
}

std::vector<NamedModel> all_models() {
    return {
        {"s1", circle(), {1, 1}},
        {"s2", sphere2(), {1, 0, 1}},
        {"torus", torus(), {1, 2, 1}},
        {"klein", klein_bottle(), {1, 1, 0}},
    };
}

ReducedSimplicialSet by_name(const std::string& name) {
    for (const NamedModel& m : all_models())
        if (m.name == name) return m.set;
    fail_domain("unknown built-in model '" + name + "'");
}

}  // namespace models
}  // namespace qhom
