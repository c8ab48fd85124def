#pragma once

#include <string>

#include "orbitope/group.hpp"
#include "orbitope/lifts.hpp"

namespace orbitope {

/// JSON forms documented in docs/file-formats.md. Rationals serialize as
/// "p/q" strings; integers and decimal strings are accepted on input.

std::string group_to_json(const GroupSpec& spec, bool pretty = false);
GroupSpec group_from_json(const std::string& text);

/// Shorthand: "s_4", "n_cube:3", "n_parity:4", "g_cube:3", "g_parity:4",
/// "dihedral8", or "@path/to/group.json".
GroupSpec parse_group_spec(const std::string& text);

std::string rep_to_json(const LiftedRep& rep, bool pretty = false);
LiftedRep rep_from_json(const std::string& text);

std::string lift_to_json(const PsdLiftSpec& lift, bool pretty = false);
PsdLiftSpec lift_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace orbitope
