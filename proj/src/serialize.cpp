#include "ce2/serialize.hpp"

#include <fstream>
#include <set>

namespace ce2 {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ParseError(what + ": unexpected field '" + k + "'");
  for (const auto& k : allowed)
    if (!j.contains(k)) throw ParseError(what + ": missing field '" + k + "'");
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
  return j.get<int>();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return {number(j[0], "re"), number(j[1], "im")};
}

Json map_to_json(const DiskMap& phi) {
  Json j;
  if (phi.is_mobius()) {
    j["kind"] = "mobius";
    j["theta"] = phi.as_mobius().theta;
    j["alpha"] = complex_to_json(phi.as_mobius().alpha);
  } else if (phi.is_affine()) {
    j["kind"] = "affine";
    j["a"] = complex_to_json(phi.as_affine().a);
    j["r"] = phi.as_affine().r;
  } else {
    j["kind"] = "series";
    Json c = Json::array();
    const auto& s = phi.as_series().series;
    for (int n = 0; n < s.cutoff(); ++n) c.push_back(complex_to_json(s[n]));
    j["coeffs"] = std::move(c);
  }
  return j;
}

DiskMap map_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("map: missing 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "mobius") {
    require_keys(j, {"kind", "theta", "alpha"}, "mobius map");
    return DiskMap::mobius(number(j["theta"], "theta"), complex_from_json(j["alpha"]));
  }
  if (kind == "affine") {
    require_keys(j, {"kind", "a", "r"}, "affine map");
    return DiskMap::affine(complex_from_json(j["a"]), number(j["r"], "r"));
  }
  if (kind == "series") {
    require_keys(j, {"kind", "coeffs"}, "series map");
    if (!j["coeffs"].is_array() || j["coeffs"].empty()) throw ParseError("series map: 'coeffs' must be a nonempty array");
    TruncatedSeries1<double> s(static_cast<int>(j["coeffs"].size()));
    for (std::size_t n = 0; n < j["coeffs"].size(); ++n) s[n] = complex_from_json(j["coeffs"][n]);
    return DiskMap::series(s);
  }
  throw ParseError("map: unknown kind '" + kind + "'");
}

std::vector<DiskMap> maps_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("maps")) throw ParseError("configuration: missing 'maps'");
    for (const auto& [k, v] : j.items())
      if (k != "maps" && k != "assert_disjoint") throw ParseError("configuration: unexpected field '" + k + "'");
    arr = &j["maps"];
  }
  if (!arr->is_array()) throw ParseError("configuration: 'maps' must be an array");
  std::vector<DiskMap> maps;
  for (const auto& m : *arr) maps.push_back(map_from_json(m));
  return maps;
}

Configuration config_from_json(const Json& j) {
  auto maps = maps_from_json(j);
  const bool asserted = j.is_object() && j.contains("assert_disjoint") && j["assert_disjoint"].get<bool>();
  return asserted ? Configuration::assert_disjoint(std::move(maps)) : Configuration::make(std::move(maps));
}

Json fock_to_json(const FockVector& v) {
  Json j;
  j["cutoffs"] = {{"modes", v.modes()}, {"particles", v.particle_cutoff()}};
  j["dropped"] = v.dropped();
  Json amps = Json::array();
  for (const auto& [idx, a] : v.sorted()) {
    Json e;
    e["nu"] = idx.occupations(idx.max_mode() + 1);
    e["amp"] = complex_to_json(a);
    amps.push_back(std::move(e));
  }
  j["amps"] = std::move(amps);
  return j;
}

FockVector fock_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("cutoffs") || !j.contains("amps")) throw ParseError("fock vector: needs 'cutoffs' and 'amps'");
  for (const auto& [k, v] : j.items())
    if (k != "cutoffs" && k != "amps" && k != "dropped") throw ParseError("fock vector: unexpected field '" + k + "'");
  require_keys(j["cutoffs"], {"modes", "particles"}, "fock cutoffs");
  FockVector v(integer(j["cutoffs"]["modes"], "modes"), integer(j["cutoffs"]["particles"], "particles"));
  if (j.contains("dropped")) v.add_dropped(integer(j["dropped"], "dropped"));
  if (!j["amps"].is_array()) throw ParseError("fock vector: 'amps' must be an array");
  for (const auto& e : j["amps"]) {
    require_keys(e, {"nu", "amp"}, "fock amplitude");
    std::vector<int> nu;
    for (const auto& x : e["nu"]) nu.push_back(integer(x, "nu"));
    v.add(OccupationIndex::from_occupations(nu), complex_from_json(e["amp"]));
  }
  return v;
}

Json heisenberg_to_json(const HeisenbergVector& v) {
  Json j;
  j["cutoffs"] = {{"particles", v.particle_cutoff()}, {"weight", v.weight_cutoff()}};
  Json amps = Json::array();
  for (const auto& [s, a] : v.table()) {
    Json e;
    e["partition"] = s.depths();
    e["amp"] = complex_to_json(a);
    amps.push_back(std::move(e));
  }
  j["amps"] = std::move(amps);
  return j;
}

HeisenbergVector heisenberg_from_json(const Json& j) {
  require_keys(j, {"cutoffs", "amps"}, "heisenberg vector");
  require_keys(j["cutoffs"], {"particles", "weight"}, "heisenberg cutoffs");
  HeisenbergVector v(integer(j["cutoffs"]["particles"], "particles"), integer(j["cutoffs"]["weight"], "weight"));
  for (const auto& e : j["amps"]) {
    require_keys(e, {"partition", "amp"}, "heisenberg amplitude");
    std::vector<int> ks;
    for (const auto& x : e["partition"]) ks.push_back(integer(x, "partition"));
    v.add(PartitionState::from_depths(ks), complex_from_json(e["amp"]));
  }
  return v;
}

}  // namespace ce2
