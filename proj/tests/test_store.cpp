#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "atlas/errors.hpp"
#include "atlas/store.hpp"

using namespace atlas;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("atlas-store-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

RunRecord sample(double k, const std::string& op = "orbits") {
    RunRecord r;
    r.family = "standard";
    r.op = op;
    r.inputs = {{"params", {{"k", k}}}, {"p", 1}, {"q", 3}};
    r.payload = {{"count", 4}};
    r.version = "0.1.0";
    return r;
}

}  // namespace

TEST_CASE("sha256 matches a published vector") {
    // FIPS 180-2 test vector for "abc".
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("").size() == 64);
}

TEST_CASE("put is content-addressed and idempotent") {
    TempDir tmp;
    RunStore store(tmp.path.string());
    std::string id1 = store.put(sample(0.9));
    std::string id2 = store.put(sample(0.9));
    CHECK(id1 == id2);
    CHECK(id1.size() == 64);
    std::string id3 = store.put(sample(0.95));
    CHECK(id3 != id1);

    // Idempotent put appends no duplicate line.
    std::ifstream in(tmp.path / "standard.jsonl");
    int lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("get round-trips the record") {
    TempDir tmp;
    RunStore store(tmp.path.string());
    RunRecord r = sample(0.7);
    r.seed = 42;
    std::string id = store.put(r);
    auto got = store.get(id);
    REQUIRE(got.has_value());
    CHECK(got->id == id);
    CHECK(got->family == "standard");
    CHECK(got->op == "orbits");
    CHECK(got->inputs["q"] == 3);
    CHECK(got->payload["count"] == 4);
    CHECK(got->seed == 42);
    CHECK(got->version == "0.1.0");

    CHECK_FALSE(store.get(std::string(64, 'a')).has_value());
}

TEST_CASE("invalid ids are rejected") {
    TempDir tmp;
    RunStore store(tmp.path.string());
    CHECK_THROWS_AS(store.get("not-a-hash"), InvalidId);
    CHECK_THROWS_AS(store.get(std::string(63, 'a')), InvalidId);
    CHECK_THROWS_AS(store.get(std::string(64, 'z')), InvalidId);
}

TEST_CASE("corruption is detected on read") {
    TempDir tmp;
    RunStore store(tmp.path.string());
    std::string id = store.put(sample(0.9));

    // Tamper with the identifying inputs: the stored id no longer matches.
    fs::path file = tmp.path / "standard.jsonl";
    std::ifstream in(file);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    in.close();
    auto pos = text.find("\"q\":3");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "\"q\":4");
    std::ofstream(file) << text;

    CHECK_THROWS_AS(store.get(id), IntegrityError);
}

TEST_CASE("query filters by family, params, op, in insertion order") {
    TempDir tmp;
    RunStore store(tmp.path.string());
    std::string a = store.put(sample(0.9, "orbits"));
    std::string b = store.put(sample(0.9, "regions"));
    std::string c = store.put(sample(0.8, "orbits"));

    auto hits = store.query("standard", {{"k", 0.9}}, "orbits");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == a);

    auto all_orbits = store.query("standard", json(), "orbits");
    REQUIRE(all_orbits.size() == 2);
    CHECK(all_orbits[0] == a);
    CHECK(all_orbits[1] == c);

    CHECK(store.query("nontwist", json(), "orbits").empty());
    CHECK(store.query("standard", json(), "").size() == 3);
    (void)b;
}

TEST_CASE("records are one json object per line") {
    TempDir tmp;
    RunStore store(tmp.path.string());
    store.put(sample(0.9));
    std::ifstream in(tmp.path / "standard.jsonl");
    std::string line;
    REQUIRE(std::getline(in, line));
    json j = json::parse(line);
    CHECK(j.contains("id"));
    CHECK(j.contains("op"));
    CHECK(j.contains("inputs"));
    CHECK(j.contains("payload"));
    CHECK(j.contains("ts"));
    CHECK(j.contains("ver"));
}
