#include "renorm/certificate.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace renorm {

json CheckEntry::to_json() const
{
    json j;
    j["id"] = id;
    j["status"] = pass ? "pass" : "fail";
    j["measured"] = measured;
    j["tolerances"] = tolerances;
    j["seed"] = seed;
    return j;
}

CheckEntry CheckEntry::from_json(const json& j)
{
    CheckEntry e;
    e.id = j.at("id").get<std::string>();
    e.pass = j.at("status").get<std::string>() == "pass";
    e.measured = j.at("measured");
    e.tolerances = j.at("tolerances");
    e.seed = j.at("seed").get<std::uint64_t>();
    return e;
}

void Certificate::add(const std::string& section, CheckEntry e)
{
    auto& list = sections[section];
    for (const auto& other : list)
        if (other.id == e.id) throw std::logic_error("duplicate check id: " + section + "/" + e.id);
    list.push_back(std::move(e));
}

bool Certificate::passed() const { return failures() == 0; }

std::size_t Certificate::failures() const
{
    std::size_t n = 0;
    for (const auto& [name, list] : sections)
        for (const auto& e : list)
            if (!e.pass) ++n;
    return n;
}

json Certificate::body() const
{
    json j;
    j["schema"] = 1;
    j["config"] = config;
    j["atlas_hash"] = atlas_hash;
    j["authoritative"] = authoritative;
    json secs = json::object();
    for (const auto& [name, list] : sections) {
        json arr = json::array();
        for (const auto& e : list) arr.push_back(e.to_json());
        secs[name] = arr;
    }
    j["sections"] = secs;
    j["status"] = passed() ? "pass" : "fail";
    return j;
}

json Certificate::to_json() const
{
    json j = body();
    j["content_hash"] = sha256_hex(j.dump());
    return j;
}

std::string Certificate::content_hash() const { return sha256_hex(body().dump()); }

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("sha256: context allocation failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

bool verify_certificate_hash(const json& doc)
{
    if (!doc.contains("content_hash")) return false;
    json body = doc;
    body.erase("content_hash");
    return sha256_hex(body.dump()) == doc.at("content_hash").get<std::string>();
}

}  // namespace renorm
