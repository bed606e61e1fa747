#include "gallery.hpp"

#include "models.hpp"
#include "torsion.hpp"

namespace qhom {
namespace gallery {

using nlohmann::json;

namespace {

GradedModule circle_homology() {
    return GradedModule{{1, 1}};
}

json betti_report(const ChainComplex& computed, const HomologyData& oracle,
                  const std::string& oracle_name) {
    HomologyData h = homology(computed);
    json j;
    j["betti"] = h.betti;
    j["euler"] = euler_characteristic(computed);
    j["oracle"] = oracle_name;
    j["oracle_betti"] = oracle.betti;
    j["ok"] = h.betti == oracle.betti && h.min_degree == oracle.min_degree;
    return j;
}

}  // namespace

MonodromyRep torus_rep() {
    return MonodromyRep(models::circle(), circle_homology());
}

MonodromyRep klein_rep() {
    MonodromyRep rho(models::circle(), circle_homology());
    QMatrix m = QMatrix::identity(2);
    m.at(1, 1) = Rational(-1);
    rho.set_action("e", std::move(m));
    return rho;
}

FibrationData hopf_fibration() {
    MonodromyRep rho(models::sphere2(), circle_homology());
    EndElement hopf(circle_homology(), 1);
    hopf.block(0).at(0, 0) = Rational(1);  // H_0 -> H_1
    return fibration_data(rho, {{"s", hopf}});
}

MonodromyRep trivial_s2_rep() {
    return MonodromyRep(models::sphere2(), circle_homology());
}

std::vector<std::string> names() {
    return {"torus", "klein", "hopf", "trivial-s2xs1", "torsion-x5"};
}

json run_entry(const std::string& name) {
    if (name == "torus") {
        ChainComplex t = fibration_complex(torus_rep());
        return betti_report(t, homology(normalized_chains(models::torus())),
                            "torus Delta-model simplicial homology");
    }
    if (name == "klein") {
        ChainComplex t = fibration_complex(klein_rep());
        return betti_report(t, homology(normalized_chains(models::klein_bottle())),
                            "Klein bottle Delta-model simplicial homology");
    }
    if (name == "hopf") {
        ChainComplex t = hopf_fibration().complex;
        return betti_report(t, homology(models::boundary_delta4_chains()),
                            "boundary of the 4-simplex (S^3) simplicial homology");
    }
    if (name == "trivial-s2xs1") {
        ChainComplex t = fibration_complex(trivial_s2_rep());
        ChainComplex product = tensor_product(normalized_chains(models::sphere2()),
                                              normalized_chains(models::circle()));
        return betti_report(t, homology(product), "Kunneth tensor of the S^2 and S^1 models");
    }
    if (name == "torsion-x5") {
        std::map<int, QMatrix> d;
        d[1] = QMatrix::from_rows({{Rational(5)}});
        BasedComplex c{ChainComplex(0, {1, 1}, std::move(d)), {}};
        Rational tau = torsion(c);
        Rational oracle = determinant(QMatrix::from_rows({{Rational(5)}})).abs();
        json j;
        j["torsion"] = tau.str();
        j["oracle"] = "determinant of the single boundary matrix";
        j["oracle_value"] = oracle.str();
        j["ok"] = tau == oracle;
        return j;
    }
    fail_domain("unknown gallery entry '" + name + "'");
    return {};
}

json run_all() {
    json entries = json::object();
    bool ok = true;
    for (const std::string& n : names()) {
        entries[n] = run_entry(n);
        ok = ok && entries[n].value("ok", false);
    }
    json j;
    j["entries"] = std::move(entries);
    j["ok"] = ok;
    return j;
}

}  // namespace gallery
}  // namespace qhom
