#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace renorm {

using json = nlohmann::json;

struct CheckEntry {
    std::string id;
    bool pass = false;
    json measured = json::object();
    json tolerances = json::object();
    std::uint64_t seed = 0;

    json to_json() const;
    static CheckEntry from_json(const json& j);
};

struct Certificate {
    std::map<std::string, std::vector<CheckEntry>> sections;
    std::string atlas_hash;
    json config = json::object();
    bool authoritative = true;

    void add(const std::string& section, CheckEntry e);
    bool passed() const;
    std::size_t failures() const;

    // Canonical document without the content hash.
    json body() const;
    json to_json() const;
    std::string content_hash() const;
};

std::string sha256_hex(const std::string& bytes);

// Recomputes the content hash of a serialized certificate and compares it with the stored one.
bool verify_certificate_hash(const json& doc);

}  // namespace renorm
