#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PANQA_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
        result.output.append(buf, n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "panqa_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli: version prints defaults, stable across runs") {
    const CliResult a = run_cli("version");
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("0.1.0") != std::string::npos);
    CHECK(a.output.find("peak=255") != std::string::npos);
    CHECK(a.output.find("hpdi=both") != std::string::npos);
    CHECK(run_cli("version").output == a.output);

    const CliResult j = run_cli("version --json");
    CHECK(j.exit_code == 0);
    const json doc = json::parse(j.output);
    CHECK(doc["version"] == "0.1.0");
    CHECK(doc["defaults"]["lowpass"] == 5);
    CHECK(doc["defaults"]["sg_normalizer"] == "printed");
}

TEST_CASE("cli: synth writes 7 PGMs plus a manifest, deterministically") {
    const fs::path dir_a = temp_dir("synth_a");
    const fs::path dir_b = temp_dir("synth_b");
    const std::string flags = "--rows 64 --cols 64 --scale 4 --seed 1 --out-dir ";

    const CliResult a = run_cli("synth " + flags + dir_a.string());
    REQUIRE(a.exit_code == 0);
    const json manifest = json::parse(a.output);
    REQUIRE(manifest["files"].size() == 7);
    for (const auto& file : manifest["files"]) {
        CHECK(fs::exists(dir_a / file.get<std::string>()));
    }

    const CliResult b = run_cli("synth " + flags + dir_b.string());
    REQUIRE(b.exit_code == 0);
    for (const auto& file : manifest["files"]) {
        const std::string name = file.get<std::string>();
        CHECK(read_file(dir_a / name) == read_file(dir_b / name));
    }
}

TEST_CASE("cli: synth rejects non-divisible dimensions with a message") {
    const fs::path dir = temp_dir("synth_bad");
    const CliResult r =
        run_cli("synth --rows 63 --cols 64 --scale 4 --seed 1 --out-dir " + dir.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("divisible") != std::string::npos);
}

TEST_CASE("cli: fuse upsample reproduces the upsampled MS; ihs wants 3 bands") {
    const fs::path dir = temp_dir("fuse");
    REQUIRE(run_cli("synth --rows 32 --cols 32 --scale 4 --seed 3 --out-dir " + dir.string())
                .exit_code == 0);
    const std::string ms = (dir / "ms_low_r.pgm").string() + "," +
                           (dir / "ms_low_g.pgm").string() + "," +
                           (dir / "ms_low_b.pgm").string();
    const std::string pan = (dir / "pan.pgm").string();

    const CliResult up = run_cli("fuse --pan " + pan + " --ms " + ms +
                                 " --method upsample --out-dir " + (dir / "up").string());
    REQUIRE(up.exit_code == 0);
    CHECK(fs::exists(dir / "up" / "fused_r.pgm"));

    // block replication is visible in the bytes: fuse again from the already
    // upsampled output and nothing changes
    const std::string fused_ms = (dir / "up" / "fused_r.pgm").string() + "," +
                                 (dir / "up" / "fused_g.pgm").string() + "," +
                                 (dir / "up" / "fused_b.pgm").string();
    const CliResult again = run_cli("fuse --pan " + pan + " --ms " + fused_ms +
                                    " --method upsample --out-dir " + (dir / "up2").string());
    REQUIRE(again.exit_code == 0);
    CHECK(read_file(dir / "up" / "fused_r.pgm") == read_file(dir / "up2" / "fused_r.pgm"));

    const CliResult ihs = run_cli("fuse --pan " + pan + " --ms " +
                                  (dir / "ms_low_r.pgm").string() + "," +
                                  (dir / "ms_low_g.pgm").string() +
                                  " --method ihs --out-dir " + (dir / "ihs").string());
    CHECK(ihs.exit_code == 1);
    CHECK(ihs.output.find("IHS requires 3 bands") != std::string::npos);

    const CliResult missing = run_cli("fuse --pan " + (dir / "nope.pgm").string() + " --ms " +
                                      ms + " --method hfa --out-dir " + dir.string());
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("nope.pgm") != std::string::npos);
}

TEST_CASE("cli: evaluate end-to-end on a synthetic bundle") {
    const fs::path dir = temp_dir("evaluate");
    REQUIRE(run_cli("synth --rows 64 --cols 64 --scale 4 --seed 1 --out-dir " + dir.string())
                .exit_code == 0);
    const std::string ms = (dir / "ms_low_r.pgm").string() + "," +
                           (dir / "ms_low_g.pgm").string() + "," +
                           (dir / "ms_low_b.pgm").string();
    const std::string pan = (dir / "pan.pgm").string();

    REQUIRE(run_cli("fuse --pan " + pan + " --ms " + ms + " --method hfa --out-dir " +
                    (dir / "hfa").string()).exit_code == 0);
    REQUIRE(run_cli("fuse --pan " + pan + " --ms " + ms + " --method upsample --out-dir " +
                    (dir / "up").string()).exit_code == 0);

    auto fused_list = [&](const std::string& sub) {
        return (dir / sub / "fused_r.pgm").string() + "," + (dir / sub / "fused_g.pgm").string() +
               "," + (dir / sub / "fused_b.pgm").string();
    };

    // upsample group == reference, so SNR cells flag as identical -> exit 2
    const CliResult r = run_cli(
        "evaluate --reference " + ms + " --pan " + pan + " --fused hfa=" + fused_list("hfa") +
        " --fused up=" + fused_list("up") + " --out-dir " + (dir / "report").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("flagged cells") != std::string::npos);

    const json doc = json::parse(read_file(dir / "report" / "report.json"));
    REQUIRE(doc["spectral"].size() == 9);  // ORG + 2 methods, 3 bands each
    CHECK(doc["spectral"][3]["method"] == "hfa");
    CHECK(doc["spectral"][6]["method"] == "up");

    // the hfa group must beat plain upsampling on sharpness, per band
    for (int b = 0; b < 3; ++b) {
        const double hfa_sg = doc["spatial"][b]["sg"].get<double>();
        const double up_sg = doc["spatial"][3 + b]["sg"].get<double>();
        CHECK(hfa_sg > up_sg);
        const double hfa_fcc = doc["spatial"][b]["fcc_avg"].get<double>();
        const double up_fcc = doc["spatial"][3 + b]["fcc_avg"].get<double>();
        CHECK(hfa_fcc > up_fcc);
    }
    // up rows: di = 0, cc = 1, snr null
    CHECK(doc["spectral"][6]["di"].get<double>() == 0.0);
    CHECK(doc["spectral"][6]["cc"].get<double>() == 1.0);
    CHECK(doc["spectral"][6]["snr"].is_null());

    for (const char* name : {"report.json", "report_spectral.csv", "report_spatial.csv",
                             "report.md", "report_long.csv"}) {
        CHECK(fs::exists(dir / "report" / name));
    }
}

TEST_CASE("cli: evaluate rejects malformed --fused and unknown formats") {
    const fs::path dir = temp_dir("evaluate_bad");
    REQUIRE(run_cli("synth --rows 32 --cols 32 --scale 4 --seed 2 --out-dir " + dir.string())
                .exit_code == 0);
    const std::string ms = (dir / "ms_low_r.pgm").string() + "," +
                           (dir / "ms_low_g.pgm").string() + "," +
                           (dir / "ms_low_b.pgm").string();
    const std::string pan = (dir / "pan.pgm").string();

    CliResult r = run_cli("evaluate --reference " + ms + " --pan " + pan +
                          " --fused nodash --out-dir " + dir.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("name=path") != std::string::npos);

    r = run_cli("evaluate --reference " + ms + " --pan " + pan + " --fused up=" + ms +
                " --format yaml --out-dir " + dir.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("unknown format") != std::string::npos);

    CHECK(run_cli("evaluate").exit_code != 0);  // missing required flags
}
