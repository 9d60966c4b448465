#include "doctest.h"

#include "fanostab/cli.hpp"
#include "fanostab/facts.hpp"
#include "fanostab/selftest.hpp"
#include "fanostab/special.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fano;

namespace {

const std::string kRoot = FANOSTAB_SOURCE_DIR;

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("cohomology command prints the quoted cells") {
    auto r = run_cli({"cohomology", "--space", "G(1,5)", "--q", "2", "--t-range", "0:0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("p=2: 2") != std::string::npos);

    auto p3 = run_cli({"cohomology", "--space", "P(3)", "--q", "1", "--t-range", "0:0"});
    CHECK(p3.code == 0);
    CHECK(p3.out.find("p=1: 1") != std::string::npos);

    // the global-section row is empty (higher cohomology does live at p=1)
    auto empty = run_cli({"cohomology", "--space", "G(1,4)", "--q", "3", "--t-range",
                          "2:2", "--p", "0"});
    CHECK(empty.code == 0);
    CHECK(empty.out.find("p=") == std::string::npos);
    auto full = run_cli({"cohomology", "--space", "G(1,4)", "--q", "3", "--t-range",
                         "2:2"});
    CHECK(full.out.find("p=1: 5") != std::string::npos);
}

TEST_CASE("cohomology records re-ingest as facts") {
    auto r = run_cli({"cohomology", "--space", "G(1,5)", "--q", "2", "--t-range",
                      "-2:2", "--format", "records"});
    CHECK(r.code == 0);
    // the records output is a self-contained fact file
    FactStore store = ingest_facts(r.out, "records");
    REQUIRE(store.cell("G(1,5)", 2, 2, 0) != nullptr);
    CHECK(store.cell("G(1,5)", 2, 2, 0)->value.dim() == 2);
}

TEST_CASE("cohomology usage errors exit 2") {
    CHECK(run_cli({"cohomology", "--space", "G(1,5)"}).code == 2);
    CHECK(run_cli({"cohomology", "--space", "Banana", "--q", "1"}).code == 2);
    CHECK(run_cli({"cohomology", "--space", "P(3)", "--q", "1", "--t-range", "5"}).code ==
          2);
}

TEST_CASE("special command certifies sections and covers") {
    auto cubic =
        run_cli({"special", "--from", "P(5)", "--section", "3", "--window", "-8:8"});
    CHECK(cubic.code == 0);
    CHECK(cubic.out.find("special: yes") != std::string::npos);
    CHECK(cubic.out.find("certificate") != std::string::npos);

    auto cover = run_cli({"special", "--from", "P(3)", "--cover", "2", "3", "--window",
                          "-6:6"});
    CHECK(cover.code == 0);
    CHECK(cover.out.find("special: yes") != std::string::npos);

    auto grass = run_cli({"special", "--from", "G(1,4)", "--window", "-4:4"});
    CHECK(grass.code == 1);
    CHECK(grass.out.find("special: no") != std::string::npos);
    CHECK(grass.out.find("(p=2,q=2,t=0) = 2") != std::string::npos);
}

TEST_CASE("special certificates round-trip through the parser") {
    auto r = run_cli({"special", "--from", "P(4)", "--section", "2", "--window", "-6:6"});
    REQUIRE(r.code == 0);
    auto certpos = r.out.find("certificate");
    REQUIRE(certpos != std::string::npos);
    auto cert = special::Certificate::parse(r.out.substr(certpos), "round-trip");
    CHECK(cert.space().dim == 3);
    CHECK(special::is_special(cert.to_table(), 3).ok());
}

TEST_CASE("chase command replays and reports stuck runs") {
    auto ok = run_cli({"chase", "--script", kRoot + "/scripts/prop_2_11.chase"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("success") != std::string::npos);

    auto spinor = run_cli({"chase", "--script", kRoot + "/scripts/lemma_2_13.chase",
                           "--facts", kRoot + "/facts/spinor10.facts"});
    CHECK(spinor.code == 0);

    // missing the fact file: stuck, exit 1, names missing facts
    auto stuck = run_cli({"chase", "--script", kRoot + "/scripts/lemma_2_13.chase"});
    CHECK(stuck.code == 1);
    CHECK(stuck.out.find("stuck") != std::string::npos);
    CHECK(stuck.out.find("S10") != std::string::npos);

    // parse errors exit 2
    auto bad = run_cli({"chase", "--script", kRoot + "/facts/spinor10.facts"});
    CHECK(bad.code == 2);
}

TEST_CASE("stability command routes and exit codes") {
    auto delpezzo = run_cli({"stability", "--n", "4", "--index", "3"});
    CHECK(delpezzo.code == 0);
    CHECK(delpezzo.out.find("verdict: Stable") != std::string::npos);

    auto g8 = run_cli({"stability", "--n", "6", "--index", "4", "--genus", "8",
                       "--assume-es", "--scripts-dir", kRoot + "/scripts",
                       "--facts-dir", kRoot + "/facts"});
    CHECK(g8.code == 0);
    CHECK(g8.out.find("verdict: Stable") != std::string::npos);
    CHECK(g8.out.find("STEP") != std::string::npos);

    auto invalid = run_cli({"stability", "--n", "5", "--index", "3", "--genus", "11"});
    CHECK(invalid.code == 2);

    auto low = run_cli({"stability", "--n", "7", "--index", "2"});
    CHECK(low.code == 1);
    CHECK(low.out.find("Unknown") != std::string::npos);
}

TEST_CASE("selftest fails loudly on a corrupted fact fixture") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "fanostab_corrupt_fixture";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "facts");
    fs::create_directories(tmp / "scripts");
    for (const auto& entry : fs::directory_iterator(kRoot + "/scripts"))
        fs::copy_file(entry.path(), tmp / "scripts" / entry.path().filename());
    {
        std::ifstream in(kRoot + "/facts/spinor10.facts");
        std::ofstream out(tmp / "facts" / "spinor10.facts");
        std::string line;
        while (std::getline(in, line))
            if (line != "vanish S10 p 1 q 6 t 4") out << line << "\n";
    }
    std::ostringstream log;
    int failures = selftest::run(tmp.string(), log);
    CHECK(failures > 0);
    CHECK(log.str().find("FAIL criterion 5") != std::string::npos);
    CHECK(log.str().find("lemma_2_13") != std::string::npos);
    fs::remove_all(tmp);
}

TEST_CASE("cli output is byte-deterministic") {
    std::vector<std::string> args{"stability", "--n", "5", "--index", "3", "--genus",
                                  "6", "--assume-es", "--scripts-dir",
                                  kRoot + "/scripts", "--facts-dir", kRoot + "/facts"};
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}
