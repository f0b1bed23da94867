// command-line driver: outputs, configuration precedence, exit codes, replay

#include "doctest.h"

#include "cli.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using tpdicke::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "tpdicke");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) MESSAGE("exit " << code << ": " << err.str());
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("tpdicke_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

nlohmann::json manifest(const fs::path& dir, const std::string& cmd) {
    return nlohmann::json::parse(slurp(dir / (cmd + ".manifest.json")));
}

} // namespace

TEST_CASE("spectrum writes CSV and manifest") {
    const auto d = fresh_dir("spectrum");
    const auto r = call({"spectrum", "--gamma", "0", "--omega0", "0.5", "--j", "1", "--nmax", "6", "--out-dir", d});
    REQUIRE(r.code == 0);
    const auto csv = slurp(d / "spectrum.csv");
    CHECK(csv.starts_with("sector,k,energy,epsilon\n"));
    CHECK(csv.find('\r') == std::string::npos);
    // decoupled: every energy is ω n + ω₀ m_z
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream f(line);
        std::string sector, k, e;
        std::getline(f, sector, ',');
        std::getline(f, k, ',');
        std::getline(f, e, ',');
        const double x = std::stod(e);
        const double twice = 2 * x;
        CHECK(std::abs(twice - std::round(twice)) <= 1e-12);
        ++rows;
    }
    CHECK(rows == 5u * 3u); // n <= n_max − 2 converge for every sector
    const auto m = manifest(d, "spectrum");
    CHECK(m["outputs"].size() == 1);
    CHECK(m["outputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(m["params"]["gamma"] == 0.0);
}

TEST_CASE("configuration file, precedence and validation") {
    const auto d = fresh_dir("config");
    const auto cfg = d / "run.ini";
    write(cfg, "gamma=0.2\nj=1\nnmax=30\nomega0=0.5\n");
    SUBCASE("file values apply, flags win") {
        auto r = call({"spectrum", "--config", cfg, "--out-dir", d});
        REQUIRE(r.code == 0);
        CHECK(manifest(d, "spectrum")["params"]["gamma"] == 0.2);
        r = call({"spectrum", "--config", cfg, "--gamma", "0.1", "--out-dir", d});
        REQUIRE(r.code == 0);
        CHECK(manifest(d, "spectrum")["params"]["gamma"] == 0.1);
        CHECK(manifest(d, "spectrum")["params"]["n_max"] == 30);
    }
    SUBCASE("unknown key names the key") {
        write(cfg, "gamma=0.2\ngamam=0.3\n");
        const auto r = call({"spectrum", "--config", cfg, "--out-dir", d});
        CHECK(r.code == 2);
        CHECK(r.err.find("gamam") != std::string::npos);
    }
    SUBCASE("malformed value") {
        write(cfg, "gamma=abc\n");
        const auto r = call({"spectrum", "--config", cfg, "--out-dir", d});
        CHECK(r.code == 2);
        CHECK(r.err.find("gamma") != std::string::npos);
    }
    SUBCASE("missing file") {
        CHECK(call({"spectrum", "--config", (d / "nope.ini").string()}).code == 2);
    }
    SUBCASE("bad j") {
        CHECK(call({"spectrum", "--j", "0.3", "--out-dir", d}).code == 2);
    }
}

TEST_CASE("exit codes") {
    const auto d = fresh_dir("codes");
    CHECK(call({}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"peres", "--gamma", "0.3", "--out-dir", d}).code == 2); // --op required
    CHECK(call({"peres", "--op", "", "--out-dir", d}).code == 2);
    CHECK(call({"peres", "--op", "spin", "--out-dir", d}).code == 2);
    const auto collapse = call({"integrable-check", "--gamma", "0.5", "--out-dir", d});
    CHECK(collapse.code == 4);
    CHECK(collapse.err.find("SpectralCollapse") != std::string::npos);
    CHECK(call({"spectrum", "--gamma", "0.7", "--out-dir", d}).code == 4);
    CHECK(call({"poincare", "--energy", "-3", "--omega0", "2", "--gamma", "0.3", "--out-dir", d}).code == 4);
    const auto few = call({"ratio", "--gamma", "0.3", "--j", "1", "--nmax", "20", "--window", "400", "--out-dir", d});
    CHECK(few.code == 4);
    CHECK(few.err.find("TooFewLevels") != std::string::npos);
    CHECK(call({"spacing", "--energy", "1", "--gamma", "0.3", "--j", "1", "--nmax", "20", "--out-dir", d}).code == 4);
}

TEST_CASE("executable reports the same exit codes") {
    const std::string exe = TPDICKE_CLI_PATH;
    const int status = std::system((exe + " integrable-check --gamma 0.6 >/dev/null 2>&1").c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 4);
}

TEST_CASE("peres outputs and overlays") {
    const auto d = fresh_dir("peres");
    const auto r = call({"peres", "--op", "jx2", "--op", "cdagc", "--gamma", "0.3", "--omega0", "0.05", "--j", "2",
                         "--nmax", "40", "--overlay", "--nc-max", "3", "--out-dir", d});
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "peres_jx2.csv").starts_with("k,epsilon,value,value_over_j,value_over_j2,dominance\n"));
    CHECK(fs::exists(d / "peres_cdagc.csv"));
    for (const char* f : {"overlay_nc_vs_mx.csv", "overlay_nc_vs_mx2.csv", "overlay_mx2_vs_nc.csv"})
        CHECK(slurp(d / f).starts_with("curve_id,n_c,m_x_or_mx2,epsilon\n"));
    CHECK(manifest(d, "peres")["outputs"].size() == 5);
}

TEST_CASE("integrable check reports the deviation") {
    const auto d = fresh_dir("check");
    const auto r = call({"integrable-check", "--gamma", "0.3", "--j", "2", "--nmax", "120", "--out-dir", d});
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("max_rel_deviation=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 18)) <= 1e-8);
    const auto detuned = call({"integrable-check", "--gamma", "0.3", "--omega0", "0.05", "--j", "2", "--nmax", "120",
                               "--out-dir", d});
    REQUIRE(detuned.code == 0);
    CHECK(std::stod(detuned.out.substr(detuned.out.find("max_rel_deviation=") + 18)) > 1e-4);
}

TEST_CASE("ratio and spacing") {
    const auto d = fresh_dir("stats");
    auto r = call({"ratio", "--gamma", "0.3", "--omega0", "2", "--j", "3", "--nmax", "300", "--window", "100",
                   "--stride", "50", "--out-dir", d});
    REQUIRE(r.code == 0);
    const auto csv = slurp(d / "ratio.csv");
    CHECK(csv.starts_with("epsilon_center,r_mean,n_levels,sector_or_avg\n"));
    CHECK(csv.find(",avg\n") != std::string::npos);
    r = call({"spacing", "--energy", "5", "--gamma", "0.3", "--omega0", "2", "--j", "3", "--nmax", "300", "--width",
              "120", "--out-dir", d});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "histogram.csv"));
    const auto m = manifest(d, "spacing");
    CHECK(m["results"].contains("a2_goe"));
    CHECK(m["results"].contains("a2_poisson"));
}

TEST_CASE("replay from the manifest is byte-identical") {
    const auto a = fresh_dir("replay_a");
    const auto b = fresh_dir("replay_b");
    REQUIRE(call({"peres", "--op", "jz", "--op", "number", "--gamma", "0.25", "--omega0", "0.4", "--j", "1.5",
                  "--nmax", "30", "--sector", "-i", "--out-dir", a})
                .code == 0);
    std::string replay;
    const auto m = manifest(a, "peres");
    for (const auto& line : m["knobs"]["replay_config"]) replay += line.get<std::string>() + "\n";
    write(b / "replay.ini", replay);
    REQUIRE(call({"peres", "--config", (b / "replay.ini").string(), "--out-dir", b}).code == 0);
    for (const char* f : {"peres_jz.csv", "peres_number.csv"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("poincare is deterministic for a fixed seed") {
    const auto a = fresh_dir("poinc_a");
    const auto b = fresh_dir("poinc_b");
    const std::vector<std::string> base{"poincare", "--energy", "1",   "--omega0", "2",   "--gamma",
                                        "0.3",      "--tmax",   "100", "--trajectories", "3", "--seed", "7"};
    auto args = base;
    args.insert(args.end(), {"--out-dir", a.string()});
    REQUIRE(call(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out-dir", b.string()});
    REQUIRE(call(args).code == 0);
    for (const char* f : {"section.csv", "boundary.csv", "disk_boundary.csv"}) {
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
}
