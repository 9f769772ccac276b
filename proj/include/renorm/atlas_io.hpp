#pragma once

#include <string>

#include "renorm/atlas.hpp"
#include "renorm/certificate.hpp"

namespace renorm {

constexpr int kAtlasSchema = 1;

// Slices are stored as [x..., psi..., delta, sign] in system coordinates.
json atlas_to_json(const SliceAtlas& atlas);
SliceAtlas atlas_from_json(const json& doc, bool check_hash = true);

// Hash over the canonical serialization without the hash field.
std::string atlas_hash(const SliceAtlas& atlas);

void save_atlas(const SliceAtlas& atlas, const std::string& path);
SliceAtlas load_atlas(const std::string& path);

json space_to_json(const Space& s);
Space space_from_json(const json& j);

}  // namespace renorm
