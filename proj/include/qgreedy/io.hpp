#pragma once

// Basis JSON files and report output.
//
//   { "ambient": {"kind":"lp","p":0.5,"dim":8}
//              | {"kind":"block_lp_l2","p":4.0,"blocks":[1,2,3]}
//              | {"kind":"lorentz","q":1.0,"weight":[...]},
//     "vectors": [[...], ...],
//     "duals":   [[...], ...],      optional
//     "labels":  ["...", ...] }     optional

#include <string>

#include "json.hpp"

#include "qgreedy/bases.hpp"

namespace qgreedy {

// Schema violations raise InvalidInput; invariant failures raise BasisError.
Basis basis_from_json(const nlohmann::json& doc);
nlohmann::json basis_to_json(const Basis& basis);
nlohmann::json ambient_to_json(const AmbientSpace& space);
Basis load_basis(const std::string& path);

// Writes `content` verbatim (binary mode, so LF stays LF).
void save_report(const std::string& path, const std::string& content);

} // namespace qgreedy
