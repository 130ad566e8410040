#pragma once
// JSON encodings used by the CLI. Key order is fixed so reports diff cleanly.

#include <json.hpp>
#include <string>

#include "ce2/fock.hpp"
#include "ce2/heisenberg.hpp"

namespace ce2 {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

// {"kind": "mobius"|"affine"|"series", ...} with exactly the fields of its kind.
Json map_to_json(const DiskMap& phi);
DiskMap map_from_json(const Json& j);

// {"maps": [...]} or a bare array of maps. With "assert_disjoint": true,
// series pairs that cannot be decided are accepted as asserted.
Configuration config_from_json(const Json& j);
std::vector<DiskMap> maps_from_json(const Json& j);

Json fock_to_json(const FockVector& v);
FockVector fock_from_json(const Json& j);

Json heisenberg_to_json(const HeisenbergVector& v);
HeisenbergVector heisenberg_from_json(const Json& j);

}  // namespace ce2
