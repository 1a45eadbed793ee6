#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "atlas/schema.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
    fs::path root, data, out;
    Sandbox() {
        root = fs::temp_directory_path() /
               ("atlas-cli-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        data = root / "data";
        out = root / "out";
        fs::create_directories(root);
    }
    ~Sandbox() { fs::remove_all(root); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

struct RunResult {
    int code = -1;
    std::string out, err;
};

RunResult run(const Sandbox& sb, const std::string& args) {
    fs::path out_file = sb.root / "stdout.txt";
    fs::path err_file = sb.root / "stderr.txt";
    std::string cmd = std::string(ATLAS_CLI_PATH) + " " + args + " --data " +
                      sb.data.string() + " --out " + sb.out.string() + " > " +
                      out_file.string() + " 2> " + err_file.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_schema(const std::string& name) {
    return json::parse(slurp_file(fs::path(ATLAS_SOURCE_DIR) / "schemas" / name));
}

void check_schema(const std::string& schema_name, const json& value) {
    auto problems = atlas::schema_validate(load_schema(schema_name), value);
    for (const auto& p : problems) FAIL_CHECK(schema_name << ": " << p);
}

}  // namespace

TEST_CASE("help and usage errors") {
    Sandbox sb;
    CHECK(run(sb, "--help").code == 0);
    CHECK(run(sb, "no-such-subcommand").code == 2);
    CHECK(run(sb, "orbits --family standard --k 0.9 --p 0 --q 0").code == 2);
    auto bad = run(sb, "orbits --family standard --k 0.9 --p 0 --q 1 --window nonsense");
    CHECK(bad.code == 2);
    CHECK(json::parse(bad.err).contains("error"));
}

TEST_CASE("orbit pipeline: orbits, manifold, classify") {
    Sandbox sb;
    auto r = run(sb,
                 "orbits --family standard --k 0.9 --p 0 --q 1 "
                 "--window 0,1,-0.3,0.3 --grid 12x12");
    REQUIRE(r.code == 0);
    json orbits = json::parse(r.out);
    check_schema("orbits.json", orbits);
    REQUIRE(orbits.size() == 2);
    std::string saddle_id;
    for (const auto& o : orbits)
        if (o["stability"] == "hyperbolic") saddle_id = o["id"];
    REQUIRE(!saddle_id.empty());

    auto m = run(sb, "manifold --orbit " + saddle_id +
                         " --kind unstable --sign plus --arclength 3");
    REQUIRE(m.code == 0);
    json manifold = json::parse(m.out);
    check_schema("manifold.json", manifold);
    CHECK(manifold["arclength"].get<double>() >= 3.0);
    // CSV artifact with a header and one row per vertex.
    std::string csv = slurp_file(sb.out / "manifold.csv");
    CHECK(csv.rfind("s,x,y\n", 0) == 0);

    auto c = run(sb, "classify --orbit " + saddle_id + " --arclength 8 --resolution 128");
    REQUIRE(c.code == 0);
    json verdict = json::parse(c.out);
    check_schema("classify.json", verdict);
    CHECK(verdict["status"] == "essential");
}

TEST_CASE("missing orbit id is a detector error, malformed id a usage error") {
    Sandbox sb;
    auto r = run(sb, "manifold --orbit " + std::string(64, 'a') + " --kind unstable");
    CHECK(r.code == 1);
    CHECK(json::parse(r.err)["error"] == "missing_orbit");
    auto bad = run(sb, "manifold --orbit nothex");
    CHECK(bad.code == 1);
    CHECK(json::parse(bad.err).contains("error"));
}

TEST_CASE("regions, report replay, and warm-store byte identity") {
    Sandbox sb;
    std::string args =
        "regions --family standard --k 2.0 --y-range -0.5,0.5 --scan 4 --q-max 0";
    auto r1 = run(sb, args);
    REQUIRE(r1.code == 0);
    json regs = json::parse(r1.out);
    check_schema("regions.json", regs);
    REQUIRE(regs["regions"].size() >= 1);
    std::string id = regs["id"];

    // Second run replays from the store, byte-identical.
    auto r2 = run(sb, args);
    REQUIRE(r2.code == 0);
    CHECK(r2.out == r1.out);

    auto rep = run(sb, "report --region " + id);
    REQUIRE(rep.code == 0);
    json report = json::parse(rep.out);
    check_schema("report.json", report);
    CHECK(report["id"] == id);
    CHECK(report["payload"] == regs["regions"]);
    // Replay of the report itself is byte-identical too.
    auto rep2 = run(sb, "report --region " + id);
    CHECK(rep2.out == rep.out);
}

TEST_CASE("connect consumes a stored regions record") {
    Sandbox sb;
    auto r1 = run(sb,
                  "regions --family standard --k 2.0 --y-range -0.5,0.5 --scan 4 "
                  "--q-max 1");
    REQUIRE(r1.code == 0);
    std::string id = json::parse(r1.out)["id"];
    auto c = run(sb, "connect --region " + id + " --delta 0.2 --steps 100000");
    REQUIRE(c.code == 0);
    json ev = json::parse(c.out);
    check_schema("connect.json", ev);
    CHECK(ev.contains("success"));
    // Out-of-range index is a usage error.
    CHECK(run(sb, "connect --region " + id + " --index 99").code == 2);
}

TEST_CASE("scan emits an svg phase portrait") {
    Sandbox sb;
    auto r = run(sb,
                 "scan --family standard --k 0.9 --window 0,1,-0.5,0.5 "
                 "--seeds 10 --steps 200");
    REQUIRE(r.code == 0);
    std::string svg = slurp_file(sb.out / "portrait.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::string csv = slurp_file(sb.out / "portrait.csv");
    CHECK(csv.rfind("seed,x,y\n", 0) == 0);
}

TEST_CASE("coverage writes json, csv and svg artifacts") {
    Sandbox sb;
    auto r = run(sb,
                 "coverage --family standard --k 0.9 --delta 0.05 "
                 "--window 0,1,-0.3,0.3 --grid 24x16 --budget 1");
    REQUIRE(r.code == 0);
    json rep = json::parse(r.out);
    check_schema("coverage.json", rep);
    CHECK(rep["nx"] == 24);
    CHECK(fs::exists(sb.out / "coverage.csv"));
    CHECK(fs::exists(sb.out / "coverage.svg"));
}

TEST_CASE("config file supplies parameters, flags win") {
    Sandbox sb;
    fs::path cfg = sb.root / "run.cfg";
    std::ofstream(cfg) << "family = standard\nparams.k = 0.9\n";
    auto r = run(sb, "orbits --config " + cfg.string() +
                         " --p 0 --q 1 --window 0,1,-0.3,0.3 --grid 12x12");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).size() == 2);

    // A flag overrides the file: at k = 0 every fixed point is degenerate
    // (the shear has trace exactly 2), unlike the k = 0.9 pair above.
    auto r2 = run(sb, "orbits --config " + cfg.string() +
                          " --k 0 --p 0 --q 1 --window 0,1,-0.3,0.3 --grid 4x4");
    REQUIRE(r2.code == 0);
    for (const auto& o : json::parse(r2.out)) CHECK(o["stability"] == "degenerate");
}

TEST_CASE("user-defined family via config expressions") {
    Sandbox sb;
    fs::path cfg = sb.root / "user.cfg";
    std::ofstream(cfg) << "family = user\n"
                       << "map.fx = \"x + y - (k/(2*pi))*sin(2*pi*x)\"\n"
                       << "map.fy = \"y - (k/(2*pi))*sin(2*pi*x)\"\n"
                       << "params.k = 0.9\n";
    auto r = run(sb, "orbits --config " + cfg.string() +
                         " --p 0 --q 1 --window 0,1,-0.3,0.3 --grid 8x8");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).size() == 2);
}
