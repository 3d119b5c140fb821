#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "fbms/checks.hpp"
#include "fbms/cli.hpp"
#include "support.hpp"

using namespace fbms;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("fbms_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "fbms");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Captures std::cerr for the lifetime of the object.
struct CaptureCerr {
    std::ostringstream buf;
    std::streambuf* old;
    CaptureCerr() : old(std::cerr.rdbuf(buf.rdbuf())) {}
    ~CaptureCerr() { std::cerr.rdbuf(old); }
};

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("pipeline on the disk exits 0 with a valid report that replays") {
        TempDir dir;
        const std::string report = dir / "pipe.json";
        CHECK(run({"pipeline", "--exemplar", "disk", "--refine", "2", "--perturb", "0.03", "--report", report,
                   "--schema-check"}) == cli::ExitCode::ok);
        const auto j = nlohmann::json::parse(slurp(report));
        CHECK(j["version"] == cli::kVersion);
        CHECK(j["all_passed"] == true);
        CHECK(j["checks"][0]["name"] == "solver_converged");
        CHECK(j["solver"]["converged"] == true);
        CHECK(j.contains("run_config"));
        CHECK(validate_report_schema(j).empty());
        CHECK(run({"report", "--input", report, "--replay"}) == cli::ExitCode::ok);
        CHECK(run({"report", "--input", report}) == cli::ExitCode::ok);
    }

    TEST_CASE("generate is deterministic") {
        TempDir dir;
        for (const char* name : {"a.off", "b.off"}) {
            REQUIRE(run({"generate", "--exemplar", "catenoid", "--refine", "1", "--perturb", "0.01", "--seed", "11", "-o",
                         dir / name, "--report", dir / (std::string(name) + ".json")}) == cli::ExitCode::ok);
        }
        CHECK(slurp(dir / "a.off") == slurp(dir / "b.off"));
        CHECK(!slurp(dir / "a.off").empty());
    }

    TEST_CASE("verify and spectrum on a generated mesh") {
        TempDir dir;
        REQUIRE(run({"generate", "--exemplar", "disk", "--refine", "2", "-o", dir / "d.obj", "--report", dir / "g.json"}) == 0);
        CHECK(run({"verify", "--input", dir / "d.obj", "--report", dir / "v.json", "--schema-check"}) == cli::ExitCode::ok);
        CHECK(run({"spectrum", "--input", dir / "d.obj", "--num-eigs", "3", "--report", dir / "s.json"}) == cli::ExitCode::ok);
        const auto s = nlohmann::json::parse(slurp(dir / "s.json"));
        CHECK(s["spectrum"]["eigenvalues"].size() == 3);
        CHECK(s["spectrum"]["sigma1"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
    }

    TEST_CASE("closed surface is rejected") {
        TempDir dir;
        {
            std::ofstream out(dir / "octa.off");
            write_off(test::octahedron(), out);
        }
        CaptureCerr err;
        CHECK(run({"verify", "--input", dir / "octa.off", "--report", dir / "r.json"}) == cli::ExitCode::usage_or_io);
        CHECK(err.buf.str().find("closed surface rejected") != std::string::npos);
    }

    TEST_CASE("usage and configuration errors exit 1") {
        TempDir dir;
        CaptureCerr err;
        CHECK(run({"pipeline", "--bogus"}) == cli::ExitCode::usage_or_io);
        CHECK(run({"verify"}) == cli::ExitCode::usage_or_io);
        CHECK(run({"verify", "--input", dir / "missing.off"}) == cli::ExitCode::usage_or_io);
        {
            std::ofstream out(dir / "amb.json");
            out << "{\"kind\": \"level_set\", \"name\": \"ellipsoid\", \"semiaxes\": [1, 2]}";
        }
        CHECK(run({"generate", "--exemplar", "disk", "--ambient", dir / "amb.json", "--perturb", "0.01", "-o",
                   dir / "x.off"}) == cli::ExitCode::usage_or_io);
        {
            std::ofstream out(dir / "bad.json");
            out << "{not json";
        }
        CHECK(run({"pipeline", "--exemplar", "disk", "--ambient", dir / "bad.json"}) == cli::ExitCode::usage_or_io);
        CHECK(run({"generate", "--exemplar", "torus", "-o", dir / "t.off"}) == cli::ExitCode::usage_or_io);
    }

    TEST_CASE("non-minimal input fails verification with exit 2 only when a check fails") {
        TempDir dir;
        REQUIRE(run({"generate", "--exemplar", "parallel_disk", "--height", "0.4", "-o", dir / "p.off", "--report",
                     dir / "g.json"}) == 0);
        const int code = run({"verify", "--input", dir / "p.off", "--report", dir / "v.json"});
        const auto j = nlohmann::json::parse(slurp(dir / "v.json"));
        CHECK(j["minimal"] == false);
        CHECK(code == (j["all_passed"].get<bool>() ? cli::ExitCode::ok : cli::ExitCode::check_failure));
    }
}
