#include "orbitope/json_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace orbitope {

namespace {

using nlohmann::json;

json rational_to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p())
    return json(static_cast<long>(q.get_num().get_si()));
  return json(to_string(q));
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (j.is_string()) {
    auto q = parse_rational(j.get<std::string>());
    if (q) return *q;
  }
  throw Error("json: cannot parse rational at " + where);
}

json matrix_to_json(const RatMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw Error("json: expected a matrix at " + where);
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  RatMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) throw Error("json: ragged matrix at " + where);
    for (int c = 0; c < cols; ++c)
      m.at(i, c) = rational_from_json(j[i][c], where + "[" + std::to_string(i) + "]");
  }
  return m;
}

json generator_to_json(const SignedPermutation& g) {
  // one-line permutation notation, 1-based: image of coordinate j
  json perm = json::array();
  for (int j = 0; j < g.ambient_n(); ++j) perm.push_back(g.perm()[j] + 1);
  json signs = json::array();
  for (int s : g.signs()) signs.push_back(s);
  return json{{"perm", perm}, {"signs", signs}};
}

SignedPermutation generator_from_json(const json& j, const std::string& where) {
  if (!j.contains("perm") || !j.contains("signs"))
    throw Error("json: generator needs 'perm' and 'signs' at " + where);
  std::vector<int> perm, signs;
  for (const auto& v : j["perm"]) perm.push_back(v.get<int>() - 1);
  for (const auto& v : j["signs"]) signs.push_back(v.get<int>());
  return SignedPermutation(std::move(perm), std::move(signs));
}

std::string kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::SymmetricGroup: return "symmetric";
    case GroupKind::NCube: return "n_cube";
    case GroupKind::NParity: return "n_parity";
    case GroupKind::GCube: return "g_cube";
    case GroupKind::GParity: return "g_parity";
    case GroupKind::Dihedral8: return "dihedral8";
    case GroupKind::Custom: return "custom";
  }
  return "custom";
}

}  // namespace

std::string group_to_json(const GroupSpec& spec, bool pretty) {
  json j;
  j["kind"] = kind_name(spec.kind);
  j["ambient_n"] = spec.ambient_n;
  if (spec.kind == GroupKind::Custom) {
    j["declared_abelian"] = spec.declared_abelian;
    json gens = json::array();
    for (const auto& g : spec.generators) gens.push_back(generator_to_json(g));
    j["generators"] = std::move(gens);
  }
  return pretty ? j.dump(2) : j.dump();
}

GroupSpec group_from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.value("kind", "custom");
  int n = j.value("ambient_n", 0);
  if (kind == "symmetric") return GroupSpec::symmetric(n);
  if (kind == "n_cube") return GroupSpec::n_cube(n);
  if (kind == "n_parity") return GroupSpec::n_parity(n);
  if (kind == "g_cube") return GroupSpec::g_cube(n);
  if (kind == "g_parity") return GroupSpec::g_parity(n);
  if (kind == "dihedral8") return GroupSpec::dihedral8();
  if (kind != "custom") throw Error("json: unknown group kind '" + kind + "'");
  std::vector<SignedPermutation> gens;
  if (j.contains("generators")) {
    int idx = 0;
    for (const auto& g : j["generators"])
      gens.push_back(generator_from_json(g, "generators[" + std::to_string(idx++) + "]"));
  }
  return GroupSpec::custom(n, std::move(gens), j.value("declared_abelian", false));
}

GroupSpec parse_group_spec(const std::string& text) {
  if (!text.empty() && text[0] == '@') return group_from_json(read_text_file(text.substr(1)));
  if (text == "dihedral8") return GroupSpec::dihedral8();
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  int n = 0;
  if (colon != std::string::npos) {
    try {
      n = std::stoi(text.substr(colon + 1));
    } catch (...) {
      throw Error("bad group spec '" + text + "'");
    }
  } else if (kind.rfind("s_", 0) == 0) {
    try {
      n = std::stoi(kind.substr(2));
      kind = "s";
    } catch (...) {
      throw Error("bad group spec '" + text + "'");
    }
  }
  if (kind == "s" || kind == "symmetric") return GroupSpec::symmetric(n);
  if (kind == "n_cube") return GroupSpec::n_cube(n);
  if (kind == "n_parity") return GroupSpec::n_parity(n);
  if (kind == "g_cube") return GroupSpec::g_cube(n);
  if (kind == "g_parity") return GroupSpec::g_parity(n);
  throw Error("bad group spec '" + text + "' (try g_parity:4, s_3, dihedral8, @file.json)");
}

std::string rep_to_json(const LiftedRep& rep, bool pretty) {
  json j;
  j["group"] = json::parse(group_to_json(rep.spec));
  j["dimension"] = rep.dimension;
  json images = json::array();
  for (const auto& m : rep.generator_images) images.push_back(matrix_to_json(m));
  j["generator_images"] = std::move(images);
  return pretty ? j.dump(2) : j.dump();
}

LiftedRep rep_from_json(const std::string& text) {
  json j = json::parse(text);
  LiftedRep rep;
  rep.spec = group_from_json(j.at("group").dump());
  rep.dimension = j.at("dimension").get<int>();
  int idx = 0;
  for (const auto& m : j.at("generator_images"))
    rep.generator_images.push_back(matrix_from_json(m, "generator_images[" + std::to_string(idx++) + "]"));
  return rep;
}

std::string lift_to_json(const PsdLiftSpec& lift, bool pretty) {
  json j;
  j["d"] = lift.d;
  j["ambient_dim"] = lift.ambient_dim;
  j["offset"] = matrix_to_json(lift.offset);
  json basis = json::array();
  for (const auto& b : lift.slice_basis) basis.push_back(matrix_to_json(b));
  j["slice_basis"] = std::move(basis);
  json proj = json::array();
  for (const auto& p : lift.projection) proj.push_back(matrix_to_json(p));
  j["projection"] = std::move(proj);
  return pretty ? j.dump(2) : j.dump();
}

PsdLiftSpec lift_from_json(const std::string& text) {
  json j = json::parse(text);
  PsdLiftSpec lift;
  lift.d = j.at("d").get<int>();
  lift.ambient_dim = j.at("ambient_dim").get<int>();
  lift.offset = matrix_from_json(j.at("offset"), "offset");
  int idx = 0;
  for (const auto& b : j.at("slice_basis"))
    lift.slice_basis.push_back(matrix_from_json(b, "slice_basis[" + std::to_string(idx++) + "]"));
  idx = 0;
  for (const auto& p : j.at("projection"))
    lift.projection.push_back(matrix_from_json(p, "projection[" + std::to_string(idx++) + "]"));
  lift.validate();
  return lift;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
}

}  // namespace orbitope
