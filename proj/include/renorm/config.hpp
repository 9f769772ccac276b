#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "renorm/certificate.hpp"
#include "renorm/construction.hpp"
#include "renorm/lur.hpp"
#include "renorm/smoothing.hpp"
#include "renorm/space.hpp"

namespace renorm {

constexpr int kConfigSchema = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sample counts of the certificate checks.
struct CheckSizes {
    int construction_samples = 200;
    int compatibility_samples = 1000;
    int polyhedral_samples = 1000;
    int polyhedral_sandwich = 10000;
    int lfc_points = 100;
    int lfc_neighbors = 1000;
    int equivalence_samples = 10000;
    int modulus_pairs = 2000;
    int diameter_samples = 10000;
    SmoothChecks smooth;
    LurChecks lur;
};

struct RunConfig {
    int d = 2;
    BaseNorm base;
    std::optional<Mat> E;
    std::optional<Mat> Phi;
    ConstructionConfig construction;
    std::uint64_t seed = 0;
    std::set<std::string> stages = {"atlas", "polyhedral", "smooth", "lur", "verify"};
    std::string lur_ambient = "smooth";
    LurParams lur = LurParams::defaults();
    CheckSizes checks;
    std::string out_dir = "out";
    double tolerance_scale = 1.0;

    RunConfig();

    bool has(const std::string& stage) const { return stages.count(stage) > 0; }
    // Throws ConfigError.
    void validate() const;
    json to_json() const;
};

// Throws ConfigError for unknown keys, wrong types or out-of-range values.
RunConfig config_from_json(const json& j);
RunConfig load_config(const std::string& path);
std::set<std::string> parse_stages(const std::string& list);

// Check sizes with the adjustable tolerances multiplied by tolerance_scale.
CheckSizes effective_checks(const RunConfig& cfg);

}  // namespace renorm
