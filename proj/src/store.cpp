#include "atlas/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "atlas/errors.hpp"

namespace atlas {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string run_record_id(const std::string& family, const json& params,
                          const std::string& op, const json& inputs,
                          const std::string& version) {
    json canonical = {{"family", family},
                      {"params", params},
                      {"op", op},
                      {"inputs", inputs},
                      {"ver", version}};
    return sha256_hex(canonical.dump());
}

std::string RunStore::default_data_dir() {
    if (const char* env = std::getenv("ATLAS_DATA")) return env;
    return "./atlas-data";
}

RunStore::RunStore(std::string data_dir) : data_dir_(std::move(data_dir)) {}

namespace {

std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool valid_id(const std::string& id) {
    if (id.size() != 64) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isxdigit(static_cast<unsigned char>(c));
    });
}

json record_to_line(const RunRecord& r) {
    json j = {{"id", r.id},      {"op", r.op},       {"inputs", r.inputs},
              {"payload", r.payload},
              {"seed", r.seed ? json(*r.seed) : json(nullptr)},
              {"ts", r.timestamp}, {"ver", r.version}};
    return j;
}

std::optional<RunRecord> line_to_record(const std::string& line, const std::string& family) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id")) return std::nullopt;
    RunRecord r;
    r.id = j.value("id", "");
    r.op = j.value("op", "");
    r.family = family;
    r.inputs = j.value("inputs", json::object());
    r.payload = j.value("payload", json::object());
    if (j.contains("seed") && !j["seed"].is_null())
        r.seed = j["seed"].get<std::int64_t>();
    r.timestamp = j.value("ts", "");
    r.version = j.value("ver", "");
    return r;
}

// The id must match the hash of the record's identifying content.
bool record_integrity_ok(const RunRecord& r) {
    json params = r.inputs.contains("params") ? r.inputs["params"] : json::object();
    return r.id == run_record_id(r.family, params, r.op, r.inputs, r.version);
}

}  // namespace

std::string RunStore::put(RunRecord record) {
    if (record.family.empty()) throw IoError("put: record needs a family");
    json params = record.inputs.contains("params") ? record.inputs["params"] : json::object();
    record.id = run_record_id(record.family, params, record.op, record.inputs, record.version);
    if (record.timestamp.empty()) record.timestamp = iso8601_now();

    fs::create_directories(data_dir_);
    fs::path file = fs::path(data_dir_) / (record.family + ".jsonl");

    // Existing copy wins (append-only dedup).
    if (fs::exists(file)) {
        std::ifstream in(file);
        std::string line;
        while (std::getline(in, line)) {
            auto r = line_to_record(line, record.family);
            if (r && r->id == record.id) return record.id;
        }
    }

    int fd = ::open(file.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw IoError("put: cannot open " + file.string());
    if (::flock(fd, LOCK_EX) != 0) {
        ::close(fd);
        throw IoError("put: cannot lock " + file.string());
    }
    std::string line = record_to_line(record).dump() + "\n";
    ssize_t n = ::write(fd, line.data(), line.size());
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (n != static_cast<ssize_t>(line.size()))
        throw IoError("put: short write to " + file.string());
    return record.id;
}

std::optional<RunRecord> RunStore::get(const std::string& id) const {
    if (!valid_id(id)) throw InvalidId("get: id must be 64 hex characters");
    if (!fs::exists(data_dir_)) return std::nullopt;
    for (const auto& entry : fs::directory_iterator(data_dir_)) {
        if (entry.path().extension() != ".jsonl") continue;
        std::string family = entry.path().stem().string();
        std::ifstream in(entry.path());
        if (!in) throw IoError("get: cannot read " + entry.path().string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.find(id) == std::string::npos) continue;
            auto r = line_to_record(line, family);
            if (!r || r->id != id) continue;
            if (!record_integrity_ok(*r))
                throw IntegrityError("get: stored record " + id + " fails its hash check");
            return r;
        }
    }
    return std::nullopt;
}

std::vector<std::string> RunStore::query(const std::string& family, const json& params,
                                         const std::string& op) const {
    std::vector<std::string> ids;
    fs::path file = fs::path(data_dir_) / (family + ".jsonl");
    if (!fs::exists(file)) return ids;
    std::ifstream in(file);
    if (!in) throw IoError("query: cannot read " + file.string());
    std::string line;
    while (std::getline(in, line)) {
        auto r = line_to_record(line, family);
        if (!r) continue;  // corrupt lines do not poison the rest
        if (!op.empty() && r->op != op) continue;
        if (!params.is_null() && !params.empty()) {
            json rp = r->inputs.contains("params") ? r->inputs["params"] : json::object();
            if (rp != params) continue;
        }
        ids.push_back(r->id);
    }
    return ids;
}

}  // namespace atlas
