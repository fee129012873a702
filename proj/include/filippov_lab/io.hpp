#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "filippov_lab/pws_model.hpp"

namespace flab::io {

using Json = nlohmann::ordered_json;

// %.17g: enough digits to round-trip any double.
std::string fmt17(double v);

// Pretty JSON with doubles printed by fmt17.
std::string dump(const Json& j, int indent = 2);

PwsSystem parse_system(std::string_view text);
PwsSystem load_system(const std::string& path);
Json system_to_json(const PwsSystem& sys);

// sha256 of the canonical (key-sorted, compact) form of a JSON document.
std::string canonical_digest(std::string_view json_text);

}  // namespace flab::io
