#ifndef ABELGEN_TOML_HPP
#define ABELGEN_TOML_HPP

#include <string>

#include <json.hpp>

namespace abelgen {

// Minimal TOML reader covering the scene-document subset: tables, arrays of
// tables, bare/quoted keys, strings, integers, floats, booleans, and
// (possibly multiline, nested) arrays.  Throws error(parse_error).
nlohmann::json parse_toml(const std::string& text);

// Reads a scene document: .toml via parse_toml, .json via nlohmann.
nlohmann::json load_document(const std::string& path);

}  // namespace abelgen

#endif
