#include "jobs.hpp"

#include <cstdlib>
#include <filesystem>

#include "gallery.hpp"
#include "io.hpp"
#include "models.hpp"

namespace qhom {
namespace jobs {

using nlohmann::json;

int max_total_dim() {
    const char* env = std::getenv("TWISTED_CHAINS_MAX_DIM");
    if (!env) return 512;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) return 512;
    return static_cast<int>(v);
}

namespace {

void check_cap(const ChainComplex& c, const std::string& what) {
    if (c.total_dim() > max_total_dim())
        fail_domain(what + " has total dimension " + std::to_string(c.total_dim()) +
                    ", above the TWISTED_CHAINS_MAX_DIM cap of " +
                    std::to_string(max_total_dim()));
}

std::string dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

// Base resolution for files that carry a "base" reference: an explicit
// --base argument wins, otherwise the reference resolves relative to the
// referencing file.
io::BaseResolver make_resolver(const json& args, const std::string& ref_file) {
    std::string override_ref = args.value("base", "");
    std::string dir = dir_of(ref_file);
    return [override_ref, dir](const std::string& ref) {
        if (!override_ref.empty()) return io::resolve_base_ref(override_ref, "");
        return io::resolve_base_ref(ref, dir);
    };
}

ReducedSimplicialSet load_base_arg(const json& args) {
    if (!args.contains("base")) fail_domain("this command needs --base");
    return io::resolve_base_ref(args.at("base").get<std::string>(), "");
}

json filtration_summary(const TwistingCochain& phi) {
    json levels = json::array();
    for (int n = 0; n <= phi.fiber().top() + 1; ++n) {
        FiltrationLevel level = homological_filtration(phi, n);
        FiltrationQuotient q = filtration_quotient(phi, n);
        json entry;
        entry["level"] = n;
        entry["dims"] = level.complex.dims();
        entry["betti"] = homology(level.complex).betti;
        entry["quotient_betti"] = homology(q.cokernel).betti;
        entry["iso_check"] = q.iso_check;
        levels.push_back(std::move(entry));
    }
    return levels;
}

json cmd_homology(const json& args) {
    ChainComplex c;
    if (args.contains("fiber")) {
        c = io::complex_from_json(io::load_json_file(args.at("fiber").get<std::string>()));
        ComplexReport rep = verify_complex(c);
        if (!rep.ok) fail_domain(rep.message);
    } else if (args.contains("base")) {
        c = normalized_chains(load_base_arg(args));
    } else {
        fail_domain("homology needs --base (simplicial set) or --fiber (chain complex)");
    }
    check_cap(c, "complex");
    json j = io::homology_to_json(homology(c));
    j["dims"] = c.dims();
    j["euler"] = euler_characteristic(c);
    return j;
}

json cmd_twisted(const json& args) {
    TwistingCochain phi;
    if (args.contains("twist")) {
        std::string path = args.at("twist").get<std::string>();
        phi = io::cochain_from_json(io::load_json_file(path), make_resolver(args, path));
    } else if (args.contains("rep")) {
        std::string path = args.at("rep").get<std::string>();
        MonodromyRep rho = io::rep_from_json(io::load_json_file(path), make_resolver(args, path));
        RepReport rr = verify_rep(rho);
        if (!rr.ok) fail_domain(rr.message);
        phi = fibration_data(rho).phi;
    } else {
        fail_domain("twisted needs --rep or --twist");
    }
    ChainComplex t = twisted_tensor(phi);
    check_cap(t, "twisted complex");
    long long chi_base = euler_characteristic(normalized_chains(phi.base()));
    long long chi_fiber = 0;
    for (int q = 0; q <= phi.fiber().top(); ++q)
        chi_fiber += (q % 2 == 0 ? 1 : -1) * phi.fiber().dim(q);
    json j;
    j["dims"] = t.dims();
    j["betti"] = homology(t).betti;
    j["euler"] = euler_characteristic(t);
    j["euler_base_times_fiber"] = chi_base * chi_fiber;
    j["euler_ok"] = euler_characteristic(t) == chi_base * chi_fiber;
    j["filtration"] = filtration_summary(phi);
    return j;
}

json cmd_bpl(const json& args) {
    ReducedSimplicialSet base = load_base_arg(args);
    if (!args.contains("fiber")) fail_domain("bpl needs --fiber (fiber chain complex)");
    ChainComplex fiber =
        io::complex_from_json(io::load_json_file(args.at("fiber").get<std::string>()));
    ComplexReport frep = verify_complex(fiber);
    if (!frep.ok) fail_domain("fiber model: " + frep.message);
    ChainComplex big = base_tensor_fiber(base, fiber);
    check_cap(big, "base tensor fiber complex");
    if (!args.contains("perturbation")) fail_domain("bpl needs --perturbation");
    GradedMap t = io::perturbation_from_json(
        io::load_json_file(args.at("perturbation").get<std::string>()), big);
    TransferContext ctx = transferred_twisting(base, fiber, t);

    json j;
    j["cochain"] = io::cochain_to_json(ctx.phi, args.value("base", ""));
    j["betti"] = homology(ctx.twisted).betti;
    j["sdr_verified"] = verify_sdr(ctx.sdr).ok;
    std::map<int, QMatrix> jm, rm, hm, dm;
    for (int n = ctx.sdr.big.min_degree(); n <= ctx.sdr.big.max_degree() + 1; ++n) {
        jm[n] = ctx.sdr.j.component(n);
        rm[n] = ctx.sdr.r.component(n);
        hm[n] = ctx.sdr.h.at(n, ctx.sdr.big, ctx.sdr.big);
        dm[n] = ctx.sdr.small.diff(n);
    }
    j["j"] = io::graded_matrices_to_json(jm);
    j["r"] = io::graded_matrices_to_json(rm);
    j["h"] = io::graded_matrices_to_json(hm);
    j["d"] = io::graded_matrices_to_json(dm);
    return j;
}

json cmd_unipotent(const json& args) {
    if (!args.contains("rep")) fail_domain("unipotent needs --rep");
    std::string path = args.at("rep").get<std::string>();
    MonodromyRep rho = io::rep_from_json(io::load_json_file(path), make_resolver(args, path));
    UnipotentResult u = is_unipotent(rho);
    json j;
    j["unipotent"] = u.unipotent;
    if (u.unipotent) {
        json fil = json::array();
        for (const QMatrix& w : u.filtration) fil.push_back(w.cols());
        fil.push_back(0);
        j["filtration_dims"] = std::move(fil);
    } else {
        j["witness_dim"] = u.witness.cols();
        j["witness"] = io::matrix_to_json(u.witness);
    }
    return j;
}

json cmd_torsion(const json& args) {
    if (!args.contains("fiber")) fail_domain("torsion needs --fiber (based chain complex)");
    BasedComplex c =
        io::based_complex_from_json(io::load_json_file(args.at("fiber").get<std::string>()));
    ComplexReport rep = verify_complex(c.complex);
    if (!rep.ok) fail_domain(rep.message);
    check_cap(c.complex, "complex");
    json j;
    j["torsion"] = torsion(c).str();
    return j;
}

json cmd_verify(const json& args) {
    json checks = json::array();
    bool all_ok = true;
    auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        checks.push_back(json{{"check", name}, {"ok", ok}, {"detail", detail}});
        all_ok = all_ok && ok;
    };

    if (args.contains("fiber")) {
        BasedComplex c =
            io::based_complex_from_json(io::load_json_file(args.at("fiber").get<std::string>()));
        check_cap(c.complex, "complex");
        ComplexReport rep = verify_complex(c.complex);
        add("complex d*d=0", rep.ok, rep.message);
        bool bases_ok = true;
        for (const auto& [n, m] : c.basis) bases_ok = bases_ok && is_invertible(m);
        add("basis matrices invertible", bases_ok, "");
    }
    if (args.contains("base")) {
        ReducedSimplicialSet x = load_base_arg(args);
        SimplicialReport sr = x.verify();
        add("simplicial identities", sr.ok, sr.message);
        if (sr.ok) {
            ChainComplex c = normalized_chains(x);
            add("normalized chains d*d=0", verify_complex(c).ok, "");
        }
    }
    if (args.contains("rep")) {
        std::string path = args.at("rep").get<std::string>();
        MonodromyRep rho = io::rep_from_json(io::load_json_file(path), make_resolver(args, path));
        RepReport rr = verify_rep(rho);
        add("representation relations", rr.ok, rr.message);
        if (rr.ok) {
            UnipotentResult u = is_unipotent(rho);
            add("unipotent", u.unipotent,
                u.unipotent ? "" : "witness dimension " + std::to_string(u.witness.cols()));
        }
    }
    if (args.contains("twist")) {
        std::string path = args.at("twist").get<std::string>();
        TwistingCochain phi =
            io::cochain_from_json(io::load_json_file(path), make_resolver(args, path));
        TwistReport tr = verify_twisting(phi);
        add("twisting identity", tr.ok, tr.message);
        if (tr.ok) {
            ChainComplex t = twisted_tensor(phi);
            check_cap(t, "twisted complex");
            add("twisted d*d=0", verify_complex(t).ok, "");
            long long chi_base = euler_characteristic(normalized_chains(phi.base()));
            long long chi_fiber = 0;
            for (int q = 0; q <= phi.fiber().top(); ++q)
                chi_fiber += (q % 2 == 0 ? 1 : -1) * phi.fiber().dim(q);
            add("euler multiplicativity", euler_characteristic(t) == chi_base * chi_fiber, "");
            bool iso_ok = true;
            for (int n = 0; n <= phi.fiber().top(); ++n)
                iso_ok = iso_ok && filtration_quotient(phi, n).iso_check;
            add("filtration quotient identification", iso_ok, "");
        }
    }
    if (args.contains("perturbation")) {
        if (!args.contains("base") || !args.contains("fiber"))
            fail_domain("verifying a perturbation needs --base and --fiber");
        ReducedSimplicialSet base = load_base_arg(args);
        ChainComplex fiber =
            io::complex_from_json(io::load_json_file(args.at("fiber").get<std::string>()));
        ChainComplex big = base_tensor_fiber(base, fiber);
        check_cap(big, "base tensor fiber complex");
        GradedMap t = io::perturbation_from_json(
            io::load_json_file(args.at("perturbation").get<std::string>()), big);
        TransferContext ctx = transferred_twisting(base, fiber, t);
        add("perturbed SDR axioms", verify_sdr(ctx.sdr).ok, "");
        add("transferred cochain twisting identity", verify_twisting(ctx.phi).ok, "");
        add("transferred differential matches twisted form", ctx.twisted == ctx.sdr.small, "");
    }
    if (checks.empty())
        fail_domain("verify needs at least one of --base, --rep, --twist, --fiber, "
                    "--perturbation");
    json j;
    j["checks"] = std::move(checks);
    j["ok"] = all_ok;
    return j;
}

json cmd_examples(const json& args) {
    if (args.value("all", false)) return gallery::run_all();
    std::string name = args.value("name", "");
    if (name.empty()) fail_domain("examples needs --all or a name");
    json entry = gallery::run_entry(name);
    json j;
    j["entries"] = json{{name, entry}};
    j["ok"] = entry.value("ok", false);
    return j;
}

}  // namespace

JobResult run_job(const std::string& command, const json& args) {
    JobResult out;
    try {
        if (command == "homology")
            out.report = cmd_homology(args);
        else if (command == "twisted")
            out.report = cmd_twisted(args);
        else if (command == "bpl")
            out.report = cmd_bpl(args);
        else if (command == "unipotent")
            out.report = cmd_unipotent(args);
        else if (command == "torsion")
            out.report = cmd_torsion(args);
        else if (command == "verify")
            out.report = cmd_verify(args);
        else if (command == "examples")
            out.report = cmd_examples(args);
        else
            fail_domain("unknown command '" + command + "'");
        if ((command == "verify" || command == "examples") && !out.report.value("ok", true))
            out.exit_code = 1;
    } catch (const Error& e) {
        out.exit_code = e.kind == Error::Kind::Parse ? 2 : 1;
        out.report = json{{"error", e.message},
                          {"kind", e.kind == Error::Kind::Parse ? "parse" : "domain"}};
    } catch (const std::exception& e) {
        out.exit_code = 2;
        out.report = json{{"error", e.what()}, {"kind", "internal"}};
    }
    return out;
}

}  // namespace jobs
}  // namespace qhom
