// Command-line front end for the qhom workbench. Talks to the shared library
// through the public C interface only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "qhom.h"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string base, rep, twist, fiber, perturbation, out;
    bool json_only = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--base", o.base, "simplicial set file, or builtin:<name>");
    cmd->add_option("--rep", o.rep, "monodromy representation file");
    cmd->add_option("--twist", o.twist, "twisting cochain file");
    cmd->add_option("--fiber", o.fiber, "chain complex file");
    cmd->add_option("--perturbation", o.perturbation, "perturbation file");
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_flag("--json", o.json_only, "emit the raw JSON report only");
}

json args_from(const CommonOpts& o) {
    json args = json::object();
    if (!o.base.empty()) args["base"] = o.base;
    if (!o.rep.empty()) args["rep"] = o.rep;
    if (!o.twist.empty()) args["twist"] = o.twist;
    if (!o.fiber.empty()) args["fiber"] = o.fiber;
    if (!o.perturbation.empty()) args["perturbation"] = o.perturbation;
    return args;
}

int emit(qhom_session* session, qhom_status status, char* report, const CommonOpts& o,
         const std::string& command) {
    std::string text = report ? report : "";
    qhom_string_free(report);
    if (text.empty()) {
        json j;
        j["error"] = qhom_last_error(session);
        text = j.dump(2) + "\n";
    }
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "qhom: cannot write '" << o.out << "'\n";
            return 2;
        }
        f << text;
    } else {
        std::cout << text;
    }
    if (!o.json_only && status != QHOM_OK)
        std::cerr << "qhom " << command << ": " << qhom_last_error(session) << "\n";
    return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qhom - exact chain-level workbench: twisted tensor products, perturbation "
                 "transfer, unipotency and torsion"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string example_name;
    bool all_examples = false;

    CLI::App* homology = app.add_subcommand(
        "homology", "Betti numbers and representatives of a complex or simplicial set");
    add_common(homology, opts);

    CLI::App* twisted = app.add_subcommand(
        "twisted", "build a twisted tensor product from a representation or cochain");
    add_common(twisted, opts);

    CLI::App* bpl = app.add_subcommand(
        "bpl", "transfer a perturbation of base (x) fiber down to base (x) homology");
    add_common(bpl, opts);

    CLI::App* unipotent =
        app.add_subcommand("unipotent", "decide unipotency of a monodromy representation");
    add_common(unipotent, opts);

    CLI::App* torsion =
        app.add_subcommand("torsion", "Reidemeister torsion of a based acyclic complex");
    add_common(torsion, opts);

    CLI::App* verify =
        app.add_subcommand("verify", "run the invariant battery on the given inputs");
    add_common(verify, opts);

    CLI::App* examples = app.add_subcommand("examples", "run the built-in example gallery");
    add_common(examples, opts);
    examples->add_flag("--all", all_examples, "run every gallery entry");
    examples->add_option("name", example_name, "run a single entry by name");

    CLI11_PARSE(app, argc, argv);

    std::unique_ptr<qhom_session, void (*)(qhom_session*)> session(qhom_session_new(),
                                                                   qhom_session_free);
    if (!session) {
        std::cerr << "qhom: cannot create session\n";
        return 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    json args = args_from(opts);
    if (command == "examples") {
        if (all_examples) args["all"] = true;
        if (!example_name.empty()) args["name"] = example_name;
    }

    char* report = nullptr;
    qhom_status status =
        qhom_run_job(session.get(), command.c_str(), args.dump().c_str(), &report);
    return emit(session.get(), status, report, opts, command);
}
