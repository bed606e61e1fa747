#include "io.hpp"

#include <filesystem>
#include <fstream>

#include "models.hpp"

namespace qhom {
namespace io {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_parse("cannot open '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail_parse("invalid JSON in '" + path + "'");
    return j;
}

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail_parse("invalid JSON");
    return j;
}

json rational_to_json(const Rational& r) {
    return r.str();
}

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    fail_parse("expected a rational as \"p/q\" string or integer");
    return {};
}

json matrix_to_json(const QMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < m.cols(); ++j2) row.push_back(rational_to_json(m.at(i, j2)));
        rows.push_back(std::move(row));
    }
    return rows;
}

QMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) fail_parse("expected a matrix as an array of rows");
    std::vector<std::vector<Rational>> rows;
    for (const json& row : j) {
        if (!row.is_array()) fail_parse("expected a matrix row as an array");
        std::vector<Rational> r;
        for (const json& x : row) r.push_back(rational_from_json(x));
        rows.push_back(std::move(r));
    }
    return QMatrix::from_rows(rows);
}

QMatrix matrix_from_json_sized(const json& j, int rows, int cols) {
    if (j.is_null()) return QMatrix(rows, cols);
    QMatrix m = matrix_from_json(j);
    if (m.rows() == 0 && m.cols() == 0) return QMatrix(rows, cols);
    if (m.rows() != rows || m.cols() != cols)
        fail_parse("matrix has shape " + std::to_string(m.rows()) + "x" +
                   std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                   std::to_string(cols));
    return m;
}

json complex_to_json(const ChainComplex& c) {
    json j;
    j["min_degree"] = c.min_degree();
    j["dims"] = c.dims();
    json diffs = json::object();
    for (int n = c.min_degree(); n <= c.max_degree() + 1; ++n) {
        QMatrix d = c.diff(n);
        if (!d.empty_shape() && !d.is_zero()) diffs[std::to_string(n)] = matrix_to_json(d);
    }
    j["differentials"] = std::move(diffs);
    return j;
}

ChainComplex complex_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dims")) fail_parse("chain complex needs a dims array");
    int min_degree = j.value("min_degree", 0);
    std::vector<int> dims;
    for (const json& d : j.at("dims")) {
        if (!d.is_number_integer() || d.get<int>() < 0)
            fail_parse("dims entries must be non-negative integers");
        dims.push_back(d.get<int>());
    }
    std::map<int, QMatrix> diffs;
    if (j.contains("differentials")) {
        for (const auto& [key, value] : j.at("differentials").items()) {
            int n = 0;
            try {
                n = std::stoi(key);
            } catch (...) {
                fail_parse("differential key '" + key + "' is not a degree");
            }
            int k = n - min_degree;
            int rows = (k - 1 >= 0 && k - 1 < static_cast<int>(dims.size())) ? dims[k - 1] : 0;
            int cols = (k >= 0 && k < static_cast<int>(dims.size())) ? dims[k] : 0;
            diffs[n] = matrix_from_json_sized(value, rows, cols);
        }
    }
    return ChainComplex(min_degree, std::move(dims), std::move(diffs));
}

json based_complex_to_json(const BasedComplex& c) {
    json j = complex_to_json(c.complex);
    json basis = json::object();
    for (const auto& [n, m] : c.basis)
        if (!m.is_identity()) basis[std::to_string(n)] = matrix_to_json(m);
    if (!basis.empty()) j["basis"] = std::move(basis);
    return j;
}

BasedComplex based_complex_from_json(const json& j) {
    BasedComplex out{complex_from_json(j), {}};
    if (j.contains("basis")) {
        for (const auto& [key, value] : j.at("basis").items()) {
            int n = std::stoi(key);
            out.basis[n] = matrix_from_json_sized(value, out.complex.dim(n), out.complex.dim(n));
        }
    }
    return out;
}

json simplicial_to_json(const ReducedSimplicialSet& x) {
    json dims = json::object();
    for (int d = 0; d <= x.top_dim(); ++d) {
        json level = json::array();
        for (int i = 0; i < x.count(d); ++i) {
            const SimplexEntry& s = x.simplex(d, i);
            json entry;
            entry["id"] = s.id;
            json faces = json::array();
            for (const FaceTarget& f : s.faces) {
                json ft;
                ft["degen"] = f.degen;
                ft["target"] = f.target;
                faces.push_back(std::move(ft));
            }
            entry["faces"] = std::move(faces);
            level.push_back(std::move(entry));
        }
        dims[std::to_string(d)] = std::move(level);
    }
    return json{{"simplices", std::move(dims)}};
}

ReducedSimplicialSet simplicial_from_json(const json& j) {
    if (!j.is_object() || !j.contains("simplices"))
        fail_parse("simplicial set needs a simplices object");
    std::vector<std::vector<SimplexEntry>> by_dim;
    for (const auto& [key, level] : j.at("simplices").items()) {
        int d = 0;
        try {
            d = std::stoi(key);
        } catch (...) {
            fail_parse("simplex dimension key '" + key + "' is not a number");
        }
        if (d < 0) fail_parse("negative simplex dimension");
        if (d >= static_cast<int>(by_dim.size())) by_dim.resize(d + 1);
        for (const json& entry : level) {
            SimplexEntry s;
            s.id = entry.value("id", "");
            if (entry.contains("faces"))
                for (const json& f : entry.at("faces")) {
                    FaceTarget ft;
                    ft.target = f.value("target", "");
                    if (f.contains("degen"))
                        for (const json& w : f.at("degen")) ft.degen.push_back(w.get<int>());
                    s.faces.push_back(std::move(ft));
                }
            by_dim[d].push_back(std::move(s));
        }
    }
    if (by_dim.empty() || by_dim[0].size() != 1 || by_dim[0][0].id != "pt")
        fail_parse("the unique 0-simplex must be named \"pt\"");
    return ReducedSimplicialSet(std::move(by_dim));
}

namespace {

GradedModule fiber_dims_from_json(const json& j) {
    GradedModule h;
    if (!j.contains("fiber_dims")) fail_parse("missing fiber_dims");
    for (const json& d : j.at("fiber_dims")) {
        if (!d.is_number_integer() || d.get<int>() < 0)
            fail_parse("fiber_dims entries must be non-negative integers");
        h.dims.push_back(d.get<int>());
    }
    return h;
}

}  // namespace

TwistingCochain cochain_from_json(const json& j, const BaseResolver& resolve) {
    if (!j.is_object()) fail_parse("twisting cochain must be an object");
    ReducedSimplicialSet base = resolve(j.value("base", ""));
    GradedModule h = fiber_dims_from_json(j);
    TwistingCochain phi(base, h);
    if (j.contains("components"))
        for (const auto& [id, m] : j.at("components").items()) {
            if (!base.has(id)) fail_parse("cochain component on unknown simplex '" + id + "'");
            int d = base.dim_of(id);
            if (d < 1) fail_parse("cochain component on the basepoint");
            phi.set(id, EndElement::from_flat(h, d - 1,
                                              matrix_from_json_sized(m, h.total(), h.total())));
        }
    return phi;
}

json cochain_to_json(const TwistingCochain& phi, const std::string& base_ref) {
    json j;
    j["base"] = base_ref;
    j["fiber_dims"] = phi.fiber().dims;
    json comps = json::object();
    for (const auto& [id, v] : phi.components()) comps[id] = matrix_to_json(v.flat());
    j["components"] = std::move(comps);
    return j;
}

MonodromyRep rep_from_json(const json& j, const BaseResolver& resolve) {
    if (!j.is_object()) fail_parse("representation must be an object");
    ReducedSimplicialSet base = resolve(j.value("base", ""));
    GradedModule h = fiber_dims_from_json(j);
    MonodromyRep rho(std::move(base), h);
    if (j.contains("action"))
        for (const auto& [id, m] : j.at("action").items())
            rho.set_action(id, matrix_from_json_sized(m, h.total(), h.total()));
    return rho;
}

json rep_to_json(const MonodromyRep& rho, const std::string& base_ref) {
    json j;
    j["base"] = base_ref;
    j["fiber_dims"] = rho.fiber().dims;
    json action = json::object();
    for (const auto& [id, m] : rho.actions()) action[id] = matrix_to_json(m);
    j["action"] = std::move(action);
    return j;
}

GradedMap perturbation_from_json(const json& j, const ChainComplex& big) {
    if (!j.is_object() || !j.contains("t")) fail_parse("perturbation needs a \"t\" family");
    GradedMap t{-1, {}};
    for (const auto& [key, m] : j.at("t").items()) {
        int n = 0;
        try {
            n = std::stoi(key);
        } catch (...) {
            fail_parse("perturbation key '" + key + "' is not a degree");
        }
        t.comps[n] = matrix_from_json_sized(m, big.dim(n - 1), big.dim(n));
    }
    return t;
}

json perturbation_to_json(const GradedMap& t) {
    json fam = json::object();
    for (const auto& [n, m] : t.comps)
        if (!m.is_zero()) fam[std::to_string(n)] = matrix_to_json(m);
    return json{{"t", std::move(fam)}};
}

json graded_matrices_to_json(const std::map<int, QMatrix>& m) {
    json out = json::object();
    for (const auto& [n, mat] : m)
        if (!mat.empty_shape()) out[std::to_string(n)] = matrix_to_json(mat);
    return out;
}

json homology_to_json(const HomologyData& h) {
    json j;
    j["min_degree"] = h.min_degree;
    j["betti"] = h.betti;
    json reps = json::object();
    for (std::size_t k = 0; k < h.representatives.size(); ++k)
        if (h.representatives[k].cols() > 0)
            reps[std::to_string(h.min_degree + static_cast<int>(k))] =
                matrix_to_json(h.representatives[k]);
    j["representatives"] = std::move(reps);
    return j;
}

ReducedSimplicialSet resolve_base_ref(const std::string& ref, const std::string& base_dir) {
    if (ref.empty()) fail_parse("missing base reference");
    const std::string builtin_prefix = "builtin:";
    if (ref.rfind(builtin_prefix, 0) == 0) return models::by_name(ref.substr(builtin_prefix.size()));
    std::filesystem::path p(ref);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return simplicial_from_json(load_json_file(p.string()));
}

}  // namespace io
}  // namespace qhom
