#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef EOI_CLI_PATH
#error "EOI_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(EOI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

} // namespace

TEST_CASE("reruns with the same seed emit identical bytes") {
    const auto a = run_cli("sample --n 4 --density 0.25 --seed 7");
    const auto b = run_cli("sample --n 4 --density 0.25 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.substr(0, 6) == "4 4 4\n"); // identity already meets 0.25
}

TEST_CASE("domain errors exit with code 2") {
    CHECK(run_cli("sample --n 4 --density 1.5 --seed 7").exit_code == 2);
    CHECK(run_cli("sample --n 4 --density 0.5 --angle-mode fixed --phi 0 --seed 1").exit_code == 2);
    CHECK(run_cli("sample-conv --c-out 4 --c-in 4 --kernel-size 4 --density 0.25").exit_code == 2);
    CHECK(run_cli("sample-conv --c-out 4 --c-in 4 --kernel-size 1 --density 0.5 "
                  "--center-mode sqrt").exit_code == 2);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("sample --n 4").exit_code == 1);              // missing required flag
    CHECK(run_cli("sample --n 4 --density 0.2 --what").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);                           // subcommand required
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("density-curve row counts and formats") {
    const auto csv = run_cli("density-curve --n 30 --t-max 50 --mc-trials 5 --seed 1");
    CHECK(csv.exit_code == 0);
    CHECK(count_lines(csv.output) == 52); // header + 51 grid points
    CHECK(csv.output.rfind("t,expected_density,mc_mean,mc_stderr\n", 0) == 0);

    const auto no_mc = run_cli("density-curve --n 30 --t-max 10 --seed 1");
    std::istringstream lines(no_mc.output);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line.rfind("0,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",,"); // mc columns empty when trials = 0

    const auto json = run_cli("--format json density-curve --n 30 --t-max 10 --seed 1");
    CHECK(json.exit_code == 0);
    const auto doc = nlohmann::json::parse(json.output);
    REQUIRE(doc.is_array());
    CHECK(doc.size() == 11);
    CHECK(doc[0]["expected_density"].get<double>() == doctest::Approx(1.0 / 30.0));
}

TEST_CASE("allocate computes and validates profiles") {
    const std::string arch_path = "tmp_cli_arch.json";
    {
        std::ofstream out(arch_path);
        out << R"({"layers":[{"kind":"fc","in":10,"out":100},{"kind":"fc","in":100,"out":100}]})";
    }

    const auto erk = run_cli("allocate --arch " + arch_path + " --density 0.1 --allocator erk");
    REQUIRE(erk.exit_code == 0);
    const auto profile = nlohmann::json::parse(erk.output);
    CHECK(profile["d"].get<double>() == 0.1);
    REQUIRE(profile["densities"].size() == 2);
    CHECK(profile["densities"][0].get<double>() == doctest::Approx(0.11 * 1100.0 / 310.0).epsilon(1e-12));

    const std::string profile_path = "tmp_cli_profile.json";
    {
        std::ofstream out(profile_path);
        out << erk.output;
    }
    const auto validated =
        run_cli("allocate --arch " + arch_path + " --density 0.1 --load " + profile_path);
    REQUIRE(validated.exit_code == 0);
    const auto report = nlohmann::json::parse(validated.output);
    CHECK(report["ok"].get<bool>());
    CHECK(report["length_ok"].get<bool>());

    const auto missing = run_cli("allocate --arch nowhere.json --density 0.1");
    CHECK(missing.exit_code == 2);

    std::remove(arch_path.c_str());
    std::remove(profile_path.c_str());
}

TEST_CASE("spectrum emits one row per grid cell, deterministically") {
    const std::string args =
        "spectrum --depth 3 --width 12 --activation linear --allocators uniform "
        "--schemes base,eoi --sparsities 0,0.5 --num-seeds 2 --inputs 2 --seed 4";
    const auto a = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(count_lines(a.output) == 9); // header + 2 schemes * 2 sparsities * 2 seeds
    CHECK(a.output.rfind("scheme,allocator,activation,sparsity,seed,mean_sv,max_sv\n", 0) == 0);
    const auto b = run_cli(args);
    CHECK(a.output == b.output);

    std::istringstream lines(a.output);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        if (line.rfind("eoi,", 0) == 0) {
            std::istringstream fields(line);
            std::string field;
            for (int i = 0; i < 6; ++i) std::getline(fields, field, ',');
            CHECK(std::stod(field) == doctest::Approx(1.0).epsilon(1e-6)); // mean_sv
        }
    }
}

TEST_CASE("bench can dump the ai loss trace") {
    const std::string trace_path = "tmp_cli_trace.csv";
    const auto run = run_cli("bench --sizes 8 --densities 0.5 --schemes ai --repeats 1 "
                             "--ai-iters 20 --seed 2 --ai-trace " + trace_path);
    REQUIRE(run.exit_code == 0);
    std::ifstream in(trace_path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "iter,loss");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 21); // initial loss + one row per iteration
    std::remove(trace_path.c_str());
}

TEST_CASE("bench keeps the schema for unavailable schemes") {
    const auto csv = run_cli("bench --sizes 16 --densities 0.25 --schemes sao,eoi --repeats 2 --seed 6");
    REQUIRE(csv.exit_code == 0);
    std::istringstream lines(csv.output);
    std::string header, sao_row, eoi_row;
    std::getline(lines, header);
    std::getline(lines, sao_row);
    std::getline(lines, eoi_row);
    CHECK(header == "scheme,n,density,wall_time_s,ortho_score,seed");
    CHECK(sao_row == "sao,16,0.25,,,6");
    CHECK(eoi_row.rfind("eoi,16,0.25,", 0) == 0);
}

TEST_CASE("matrix files written through --out round-trip") {
    const std::string path = "tmp_cli_sample.txt";
    const auto run = run_cli("sample --n 6 --m 9 --density 0.4 --seed 11 --out " + path);
    REQUIRE(run.exit_code == 0);
    CHECK(run.output.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::size_t rows, cols, nnz;
    in >> rows >> cols >> nnz;
    CHECK(rows == 6);
    CHECK(cols == 9);
    CHECK(nnz >= static_cast<std::size_t>(0.4 * 54));
    std::remove(path.c_str());
}
