#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "vce/model.hpp"
#include "vce/serialize.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

std::string binary_path() {
    const char* bin = std::getenv("VCE_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "VCE_BIN must point at the vce binary");
    return bin;
}

RunResult run_cli(const std::string& args) {
    std::string cmd = binary_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
    int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    result.code = WEXITSTATUS(status);
    return result;
}

// Fresh scratch directory shared by the cases in this file.  ctest runs each
// test binary in its own build directory, so a relative path is fine.
fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::path("cli_test_work");
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << text;
    out.close();
    return p.string();
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

const std::string kSatDimacs = "p cnf 5 2\n1 2 0\n-1 3 0\n";
const std::string kUnsatDimacs = "p cnf 4 2\n1 0\n-1 0\n";
const std::string kExact3Dimacs = "p cnf 4 1\n1 -2 3 0\n";

}  // namespace

TEST_CASE("help and argument errors") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("--help").output.find("reduce") != std::string::npos);
    CHECK(run_cli("").code == 3);         // a subcommand is required
    CHECK(run_cli("frobnicate").code == 3);
    CHECK(run_cli("lemma-check --alpha 0 --beta 5").code == 3);
    CHECK(run_cli("lemma-check --alpha 2").code == 3);  // --beta missing
    CHECK(run_cli("equiv --trials 10").code == 3);      // --seed missing
}

TEST_CASE("reduce, decide, solve and verify round trip") {
    std::string cnf = write_file("sat.cnf", kSatDimacs);
    std::string inst = path_of("sat.instance.json");
    std::string meta = path_of("sat.metadata.json");
    std::string canonical = path_of("sat.canonical.json");

    RunResult reduced = run_cli("reduce " + cnf + " --variant multi --instance " + inst +
                                " --metadata " + meta + " --canonical " + canonical);
    CHECK(reduced.code == 0);
    REQUIRE(fs::exists(inst));
    REQUIRE(fs::exists(meta));
    REQUIRE(fs::exists(canonical));

    vce::io::Json meta_doc = vce::io::load_document(meta);
    CHECK(meta_doc.at("variant") == "multi_replica");
    CHECK(meta_doc.at("threshold") == 250);
    CHECK(meta_doc.at("closed_form_threshold") == 90);

    vce::EmbeddingInstance instance =
        vce::io::instance_from_json(vce::io::load_document(inst));
    CHECK(instance.validate().ok());
    CHECK(instance.node_count == 10);

    SUBCASE("decide against the reduction threshold") {
        RunResult yes = run_cli("decide " + inst + " --metadata " + meta);
        CHECK(yes.code == 0);
        CHECK(yes.output.find("\"verdict\": \"yes\"") != std::string::npos);

        CHECK(run_cli("decide " + inst + " --threshold 249").code == 1);
        CHECK(run_cli("decide " + inst + " --threshold 499/2").code == 1);

        // exactly one threshold source must be given
        CHECK(run_cli("decide " + inst).code == 3);
        CHECK(run_cli("decide " + inst + " --threshold 250 --metadata " + meta).code == 3);
    }

    SUBCASE("solve emits a result document that verify accepts") {
        std::string result = path_of("sat.result.json");
        RunResult solved = run_cli("solve " + inst + " --output " + result);
        CHECK(solved.code == 0);
        CHECK(solved.output.empty());

        vce::io::Json result_doc = vce::io::load_document(result);
        CHECK(result_doc.at("status") == "optimal");
        CHECK(result_doc.at("footprint") == 250);

        RunResult verified = run_cli("verify " + inst + " " + result + " --metadata " + meta);
        CHECK(verified.code == 0);
        CHECK(verified.output.find("\"feasible\": true") != std::string::npos);
        CHECK(verified.output.find("\"within_threshold\": true") != std::string::npos);
    }

    SUBCASE("canonical embedding verifies at the threshold, not below it") {
        CHECK(run_cli("verify " + inst + " " + canonical + " --metadata " + meta).code == 0);
        RunResult below = run_cli("verify " + inst + " " + canonical + " --threshold 249");
        CHECK(below.code != 0);
        CHECK(below.output.find("\"within_threshold\": false") != std::string::npos);
    }
}

TEST_CASE("decide reports unknown when the budget runs out") {
    std::string cnf = write_file("unsat.cnf", kUnsatDimacs);
    std::string inst = path_of("unsat.instance.json");
    std::string meta = path_of("unsat.metadata.json");
    REQUIRE(run_cli("reduce " + cnf + " --variant multi --instance " + inst +
                    " --metadata " + meta)
                .code == 0);

    RunResult no = run_cli("decide " + inst + " --metadata " + meta);
    CHECK(no.code == 1);
    CHECK(no.output.find("\"verdict\": \"no\"") != std::string::npos);

    RunResult unknown =
        run_cli("decide " + inst + " --metadata " + meta + " --max-states 1");
    CHECK(unknown.code == 2);
    CHECK(unknown.output.find("\"verdict\": \"unknown\"") != std::string::npos);
}

TEST_CASE("reduce --canonical fails cleanly on an unsatisfiable formula") {
    std::string cnf = write_file("unsat2.cnf", kUnsatDimacs);
    std::string inst = path_of("unsat2.instance.json");
    std::string meta = path_of("unsat2.metadata.json");
    std::string canonical = path_of("unsat2.canonical.json");

    RunResult reduced = run_cli("reduce " + cnf + " --variant multi --instance " + inst +
                                " --metadata " + meta + " --canonical " + canonical);
    CHECK(reduced.code == 1);
    CHECK(fs::exists(inst));   // the reduction itself still gets written
    CHECK(fs::exists(meta));
    CHECK(!fs::exists(canonical));
}

TEST_CASE("two-replica reduction through the command line") {
    std::string cnf = write_file("exact3.cnf", kExact3Dimacs);
    std::string inst = path_of("exact3.instance.json");
    std::string meta = path_of("exact3.metadata.json");
    RunResult reduced = run_cli("reduce " + cnf + " --variant two-replica --instance " +
                                inst + " --metadata " + meta);
    CHECK(reduced.code == 0);
    vce::io::Json meta_doc = vce::io::load_document(meta);
    CHECK(meta_doc.at("variant") == "two_replica");
    CHECK(meta_doc.at("threshold") == 86);
    CHECK(run_cli("decide " + inst + " --metadata " + meta).code == 0);

    // the two-replica construction only takes width-3 clauses
    std::string wide = write_file("wide.cnf", kSatDimacs);
    CHECK(run_cli("reduce " + wide + " --variant two-replica --instance " +
                  path_of("w.json") + " --metadata " + path_of("wm.json"))
              .code == 3);
}

TEST_CASE("malformed inputs exit with code 3") {
    std::string garbage = write_file("garbage.cnf", "this is not dimacs\n");
    CHECK(run_cli("reduce " + garbage + " --variant multi --instance " + path_of("g.json") +
                  " --metadata " + path_of("gm.json"))
              .code == 3);

    CHECK(run_cli("solve " + path_of("does_not_exist.json")).code == 3);

    std::string bad_doc = write_file("bad.instance.json", "{\"format\": 1}\n");
    CHECK(run_cli("solve " + bad_doc).code == 3);

    std::string float_doc = write_file(
        "float.instance.json",
        "{\"format\": 1, \"kind\": \"instance\", \"tree\": {\"parents\": [-1], "
        "\"kinds\": [\"server\"], \"capacities\": [-1]}, \"chunks\": [], "
        "\"node_count\": 1, \"access_bandwidth\": 0.5, \"interconnect_bandwidth\": 1}\n");
    CHECK(run_cli("solve " + float_doc).code == 3);

    // decide on a metadata document (wrong kind)
    std::string cnf = write_file("kind.cnf", kSatDimacs);
    std::string inst = path_of("kind.instance.json");
    std::string meta = path_of("kind.metadata.json");
    REQUIRE(run_cli("reduce " + cnf + " --variant multi --instance " + inst +
                    " --metadata " + meta)
                .code == 0);
    CHECK(run_cli("decide " + meta + " --threshold 250").code == 3);
}

TEST_CASE("lemma-check prints a verification report") {
    RunResult base = run_cli("lemma-check --alpha 2 --beta 5");
    CHECK(base.code == 0);
    CHECK(base.output.find("bandwidth lemma check: alpha=2 beta=5") != std::string::npos);
    CHECK(base.output.find("sequences checked: 381") != std::string::npos);
    CHECK(base.output.find("verified: yes") != std::string::npos);

    RunResult extended = run_cli("lemma-check --alpha 2 --beta 5 --extended");
    CHECK(extended.code == 0);
    CHECK(extended.output.find("procedures agree: yes") != std::string::npos);

    // beta=4 sits outside the stated range but still verifies, with a note
    RunResult outside = run_cli("lemma-check --alpha 2 --beta 4");
    CHECK(outside.code == 0);
    CHECK(outside.output.find("note:") != std::string::npos);
}

TEST_CASE("equiv is deterministic for a fixed seed") {
    const std::string args = "equiv --vars 4 --clauses 2 --trials 10 --seed 3";
    RunResult first = run_cli(args);
    RunResult second = run_cli(args);
    CHECK(first.code == 0);
    CHECK(second.code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output.find("10/10 agreements") != std::string::npos);
    CHECK(first.output.find("0 disagreements") != std::string::npos);

    RunResult two = run_cli(
        "equiv --variant two-replica --vars 4 --clauses 2 --trials 5 --seed 1");
    CHECK(two.code == 0);
    CHECK(two.output.find("5/5 agreements") != std::string::npos);
}
