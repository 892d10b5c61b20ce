#pragma once

// JSON scene files. Keys are emitted sorted and rationals as "p/q" strings,
// so serialize(parse(x)) is canonical.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hoopflux/substrate.hpp"

namespace hoopflux {

using Json = nlohmann::json;

/// Throws Parse (with line and column for syntax errors, a JSON pointer for
/// structural ones) or Validation listing every violated invariant.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);

Json scene_to_json(const Scene& scene);
/// Two-space indented JSON with a trailing newline.
std::string serialize_scene(const Scene& scene);
void save_scene(const Scene& scene, const std::filesystem::path& path);

/// "a" or "-a".
Step parse_step(std::string_view text);
std::string to_string(const Step& step);
Json steps_to_json(const std::vector<Step>& steps);

/// {"face": "p/q", ...}; a bare face name means coefficient 1.
FluxCombo combo_from_json(const Json& j, const std::string& where);
Json combo_to_json(const FluxCombo& combo);
std::string to_string(const FluxCombo& combo);

std::string to_string(const Crossing& crossing);

}  // namespace hoopflux
