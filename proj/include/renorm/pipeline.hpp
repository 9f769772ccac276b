#pragma once

#include <string>
#include <vector>

#include "renorm/certificate.hpp"
#include "renorm/config.hpp"
#include "renorm/norm_handle.hpp"

namespace renorm {

struct PipelineOutput {
    Certificate cert;
    json atlas = nullptr;  // serialized atlas, null when the atlas stage did not produce one
    std::string csv;       // ball sections for d in {2, 3}
    json repro = nullptr;  // config, seed and failing entries when the certificate fails

    int exit_code() const { return cert.passed() ? 0 : 1; }
};

// Throws ConfigError for configurations that cannot be realized (for example a singular system).
PipelineOutput run_pipeline(const RunConfig& cfg);

// Writes atlas.json, certificate.json, ball_sections.csv and repro.json when present.
void write_artifacts(const PipelineOutput& out, const std::string& dir);

// One row per (norm, direction): 720 angles at d = 2, a 40 x 80 polar grid at d = 3.
std::string ball_sections_csv(int d, const std::vector<NormHandle>& norms);

// Largest sampled rho(tau) over pairs (vertex of P, direction of an adjacent edge), per tau.
struct FaceModulus {
    std::vector<double> taus;
    std::vector<double> rho;
    std::size_t pairs = 0;
};
FaceModulus polyhedral_face_modulus(const NormHandle& mu_p, const std::vector<Point>& vertices,
                                    const std::vector<double>& taus, std::size_t max_pairs = 200);

}  // namespace renorm
