#pragma once

#include "tensorial/body.hpp"

#include "json.hpp"

namespace tensorial {

/// Body <-> JSON. Polytopes and ellipsoids use kinds vpoly / hpoly / ellipsoid;
/// implicit bodies are written as an expression tree of oracle nodes.
/// Doubles are printed in shortest round-trip form, so parse(emit(B)) == B.
nlohmann::json body_to_json(const Body& b);
Body body_from_json(const nlohmann::json& j);

std::string emit_body(const Body& b);
Body parse_body(const std::string& text);

Body read_body_file(const std::string& path);
void write_body_file(const Body& b, const std::string& path);

}  // namespace tensorial
