#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "gallery.hpp"
#include "io.hpp"
#include "jobs.hpp"
#include "models.hpp"
#include "test_support.hpp"

using namespace qhom;
using nlohmann::json;
using qhom::testing::q;

namespace {

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/qhom_test_XXXXXX";
        path = mkdtemp(tmpl);
    }
    std::string write(const std::string& name, const json& j) const {
        std::string full = path + "/" + name;
        std::ofstream f(full);
        f << j.dump(2);
        return full;
    }
};

}  // namespace

TEST_CASE("complex JSON round trip") {
    std::mt19937 rng(131);
    for (int i = 0; i < 10; ++i) {
        ChainComplex c = qhom::testing::random_complex(rng, 4, 3);
        ChainComplex back = io::complex_from_json(io::complex_to_json(c));
        CHECK(back == c);
    }
}

TEST_CASE("simplicial JSON round trip") {
    for (const auto& m : models::all_models()) {
        ReducedSimplicialSet back = io::simplicial_from_json(io::simplicial_to_json(m.set));
        CHECK(back == m.set);
    }
}

TEST_CASE("rational strings reject signed denominators") {
    CHECK_THROWS_AS((void)io::rational_from_json(json("3/-7")), Error);
    CHECK(io::rational_from_json(json("-3/7")) == Rational(-3, 7));
    CHECK(io::rational_from_json(json(4)) == Rational(4));
}

TEST_CASE("malformed files produce parse errors") {
    CHECK_THROWS_AS((void)io::load_json_file("/nonexistent/file.json"), Error);
    TempDir tmp;
    std::string bad = tmp.write("bad.json", json::object());
    {
        std::ofstream f(bad);
        f << "{ not json";
    }
    CHECK_THROWS_AS((void)io::load_json_file(bad), Error);
}

TEST_CASE("complex shape violations are rejected") {
    json j;
    j["min_degree"] = 0;
    j["dims"] = {1, 1};
    j["differentials"]["1"] = json::array({json::array({"1", "2"})});  // 1x2 where 1x1 expected
    CHECK_THROWS_AS((void)io::complex_from_json(j), Error);
}

TEST_CASE("cochain and rep files resolve builtin bases") {
    json j;
    j["base"] = "builtin:s1";
    j["fiber_dims"] = {1, 1};
    j["action"]["e"] = json::array({json::array({"1", "0"}), json::array({"0", "-1"})});
    MonodromyRep rho = io::rep_from_json(j, [](const std::string& ref) {
        return io::resolve_base_ref(ref, "");
    });
    CHECK(verify_rep(rho).ok);
    CHECK(!is_unipotent(rho).unipotent);
}

TEST_CASE("based complex with basis block") {
    json j;
    j["min_degree"] = 0;
    j["dims"] = {1, 1};
    j["differentials"]["1"] = json::array({json::array({"5"})});
    j["basis"]["0"] = json::array({json::array({"2"})});
    BasedComplex c = io::based_complex_from_json(j);
    CHECK(torsion(c) == Rational(5, 2));
}

TEST_CASE("jobs: homology of a builtin base") {
    jobs::JobResult r = jobs::run_job("homology", json{{"base", "builtin:torus"}});
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("betti") == json({1, 2, 1}));
    CHECK(r.report.at("euler") == 0);
}

TEST_CASE("jobs: twisted complex from a rep file") {
    TempDir tmp;
    json rep;
    rep["base"] = "builtin:s1";
    rep["fiber_dims"] = {1, 1};
    rep["action"]["e"] = json::array({json::array({"1", "0"}), json::array({"0", "-1"})});
    std::string path = tmp.write("klein.json", rep);
    jobs::JobResult r = jobs::run_job("twisted", json{{"rep", path}});
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("betti") == json({1, 1, 0}));
    CHECK(r.report.at("euler_ok") == true);
    for (const auto& level : r.report.at("filtration")) CHECK(level.at("iso_check") == true);
}

TEST_CASE("jobs: unipotent decision") {
    TempDir tmp;
    json rep;
    rep["base"] = "builtin:s1";
    rep["fiber_dims"] = {1, 1};
    rep["action"]["e"] = json::array({json::array({"1", "0"}), json::array({"0", "-1"})});
    std::string path = tmp.write("klein.json", rep);
    jobs::JobResult r = jobs::run_job("unipotent", json{{"rep", path}});
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("unipotent") == false);
    CHECK(r.report.at("witness_dim") == 1);
}

TEST_CASE("jobs: torsion") {
    TempDir tmp;
    json c;
    c["min_degree"] = 0;
    c["dims"] = {1, 1};
    c["differentials"]["1"] = json::array({json::array({"5"})});
    std::string path = tmp.write("x5.json", c);
    jobs::JobResult r = jobs::run_job("torsion", json{{"fiber", path}});
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("torsion") == "5");
}

TEST_CASE("jobs: verify battery") {
    TempDir tmp;
    json rep;
    rep["base"] = "builtin:s1";
    rep["fiber_dims"] = {1, 1};
    std::string path = tmp.write("trivial.json", rep);
    jobs::JobResult ok = jobs::run_job("verify", json{{"rep", path}});
    CHECK(ok.exit_code == 0);
    CHECK(ok.report.at("ok") == true);

    json broken;
    broken["min_degree"] = 0;
    broken["dims"] = {1, 1, 1};
    broken["differentials"]["1"] = json::array({json::array({"1"})});
    broken["differentials"]["2"] = json::array({json::array({"2"})});
    std::string bad = tmp.write("broken.json", broken);
    jobs::JobResult fail = jobs::run_job("verify", json{{"fiber", bad}});
    CHECK(fail.exit_code == 1);
    CHECK(fail.report.at("ok") == false);
}

TEST_CASE("jobs: examples gallery all green") {
    jobs::JobResult r = jobs::run_job("examples", json{{"all", true}});
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("ok") == true);
    for (const std::string& name : gallery::names())
        CHECK(r.report.at("entries").at(name).at("ok") == true);
}

TEST_CASE("jobs: exit codes") {
    CHECK(jobs::run_job("homology", json::object()).exit_code == 1);       // missing input
    CHECK(jobs::run_job("homology", json{{"fiber", "/nope.json"}}).exit_code == 2);
    CHECK(jobs::run_job("nonsense", json::object()).exit_code == 1);
}

TEST_CASE("jobs: dimension cap") {
    setenv("TWISTED_CHAINS_MAX_DIM", "3", 1);
    jobs::JobResult r = jobs::run_job("homology", json{{"base", "builtin:torus"}});
    CHECK(r.exit_code == 1);
    CHECK(r.report.at("error").get<std::string>().find("TWISTED_CHAINS_MAX_DIM") !=
          std::string::npos);
    unsetenv("TWISTED_CHAINS_MAX_DIM");
    CHECK(jobs::run_job("homology", json{{"base", "builtin:torus"}}).exit_code == 0);
}

TEST_CASE("gallery reports are byte deterministic") {
    std::string a = gallery::run_all().dump(2);
    std::string b = gallery::run_all().dump(2);
    CHECK(a == b);
}
