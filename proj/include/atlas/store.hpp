#ifndef ATLAS_STORE_HPP
#define ATLAS_STORE_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace atlas {

// Persisted, content-addressed result of a detector run.
struct RunRecord {
    std::string id;       // sha256 over (family, params, op, inputs, version)
    std::string op;
    std::string family;
    nlohmann::json inputs;
    nlohmann::json payload;
    std::optional<std::int64_t> seed;
    std::string timestamp;  // iso8601
    std::string version;
};

std::string run_record_id(const std::string& family, const nlohmann::json& params,
                          const std::string& op, const nlohmann::json& inputs,
                          const std::string& version);

// Append-only JSON-lines store, one file per map family, under a data
// directory (env ATLAS_DATA, default ./atlas-data). Single writer per file
// via an advisory lock; any number of readers.
class RunStore {
  public:
    explicit RunStore(std::string data_dir = default_data_dir());

    static std::string default_data_dir();

    // Durable append; identical inputs store a single copy and return the
    // same id.
    std::string put(RunRecord record);

    // Exact stored record, or nullopt when missing. Throws InvalidId for a
    // malformed id and IntegrityError when the stored line is corrupt.
    std::optional<RunRecord> get(const std::string& id) const;

    // Matching ids in insertion order.
    std::vector<std::string> query(const std::string& family,
                                   const nlohmann::json& params,
                                   const std::string& op) const;

    const std::string& data_dir() const { return data_dir_; }

  private:
    std::string data_dir_;
};

std::string sha256_hex(const std::string& bytes);

}  // namespace atlas

#endif
